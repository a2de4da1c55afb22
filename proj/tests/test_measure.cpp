#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "irs/measure.hpp"
#include "irs/appearance.hpp"

using namespace irs;

namespace {

std::map<std::uint32_t, std::uint64_t> cyclic_weights(std::uint32_t max_n) {
  std::map<std::uint32_t, std::uint64_t> g;
  for (std::uint32_t n = 1; n <= max_n; ++n) g[n] = n + 2;
  return g;
}

GluedTruncation desk_truncation(std::uint64_t blocks = 20) {
  Schedule s = Schedule::build(cyclic_weights(2), 2, 200);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 2);
  return GluedTruncation(alphas, s, blocks);
}

Word rand_word(std::mt19937_64& rng, std::uint32_t max_gen, std::uint64_t max_len) {
  std::uniform_int_distribution<std::uint64_t> len(0, max_len);
  std::uniform_int_distribution<std::uint32_t> gen(0, max_gen);
  std::uniform_int_distribution<int> sign(0, 1);
  std::vector<Letter> letters;
  const std::uint64_t l = len(rng);
  for (std::uint64_t i = 0; i < l; ++i) letters.push_back({gen(rng), sign(rng) ? 1 : -1});
  return Word::from_letters(letters);
}

}  // namespace

TEST_CASE("clopen basics") {
  ClopenSet c;
  CHECK_FALSE(c.contradictory());
  c.in_words.push_back(Word::generator(0));
  c.out_words.push_back(Word::generator(0));
  CHECK(c.contradictory());
  CHECK(c.max_generator() == 0);

  ClopenSet d{{Word::parse("g1 g4")}, {Word::generator(2)}, "d"};
  CHECK(d.max_generator() == 4);

  ClopenSet e = conjugate_clopen(d, Word{});
  CHECK(e.in_words == d.in_words);
  CHECK(e.out_words == d.out_words);

  ClopenSet f = conjugate_clopen(ClopenSet{{Word::generator(1)}, {}, "f"}, Word::generator(0));
  CHECK(f.in_words[0] == Word::generator(1).conjugated_by(Word::generator(0)));
  ClopenSet back = conjugate_clopen(f, Word::generator(0, -1));
  CHECK(back.in_words[0] == Word::generator(1));
}

TEST_CASE("theta trivial values") {
  GluedTruncation b = desk_truncation();
  EmpiricalIRS e(b, 2);
  CHECK(e.support_size() == b.schedule().C(2));

  CHECK(e.theta(ClopenSet{}) == Rational(1));
  CHECK(e.theta(ClopenSet{{Word{}}, {}, ""}) == Rational(1));
  CHECK(e.theta(ClopenSet{{}, {Word{}}, ""}) == Rational(0));
  // a contradictory set is empty
  CHECK(e.theta(ClopenSet{{Word::generator(1)}, {Word::generator(1)}, ""}) == Rational(0));
}

TEST_CASE("theta bounds, additivity and monotonicity") {
  GluedTruncation b = desk_truncation();
  EmpiricalIRS e(b, 2);
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    ClopenSet base;
    base.in_words.push_back(rand_word(rng, 2, 3));
    Word extra = rand_word(rng, 2, 3);

    Rational whole = e.theta(base);
    CHECK(whole >= Rational(0));
    CHECK(whole <= Rational(1));

    ClopenSet with_in = base, with_out = base;
    with_in.in_words.push_back(extra);
    with_out.out_words.push_back(extra);
    CHECK(e.theta(with_in) + e.theta(with_out) == whole);
    CHECK(e.theta(with_in) <= whole);
  }
}

TEST_CASE("exact invariance at the stage") {
  GluedTruncation b = desk_truncation();
  EmpiricalIRS e(b, 3);

  ClopenSet c{{Word::parse("g1")}, {Word::parse("g2 g0")}, "c"};
  auto r0 = e.check_invariance(c, Word{});
  CHECK(r0.equal);

  auto r1 = e.check_invariance(c, Word::generator(0));
  CHECK(r1.equal);
  CHECK(r1.conjugated == r1.original);

  std::mt19937_64 rng(18);
  for (int i = 0; i < 200; ++i) {
    ClopenSet cs;
    cs.in_words.push_back(rand_word(rng, 3, 3));
    if (i % 2) cs.out_words.push_back(rand_word(rng, 3, 3));
    Word g = rand_word(rng, 3, 2);
    auto r = e.check_invariance(cs, g);
    CHECK(r.equal);
  }

  // indices above the stage are refused, not approximated
  ClopenSet big{{Word::generator(9)}, {}, "big"};
  CHECK_THROWS_AS(e.check_invariance(big, Word{}), std::invalid_argument);
  CHECK_THROWS_AS(e.check_invariance(c, Word::generator(9)), std::invalid_argument);
}

TEST_CASE("word_fixes is strict about leaving the truncation") {
  Schedule s = Schedule::build(cyclic_weights(2), 2, 200);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 2);
  GluedTruncation b(alphas, s, 3);
  EmpiricalIRS e(b, 2);

  // the chain from block 1 resolves inside the three materialized blocks
  CHECK_FALSE(e.word_fixes(Word::generator(4), b.block_id(1, 0)));
  // two steps along a long top cycle leave them
  CHECK_THROWS_AS(e.word_fixes(Word::generator(6, 2), b.link_id(1)), std::invalid_argument);
  CHECK_THROWS_AS(e.word_fixes(Word{}, b.points()), std::out_of_range);
}

TEST_CASE("appearance membership inside a staged orbit") {
  GluedTruncation b = desk_truncation();
  EmpiricalIRS e(b, 2);

  // a one-point action relative to 0 appears wherever g_0 fixes the point
  Schedule s = Schedule::build(cyclic_weights(2), 2, 200);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 2);
  alphas.emplace(0, FiniteAction(1, {}));
  GluedTruncation b0(alphas, s, 20);
  EmpiricalIRS e0(b0, 2);
  StagedProduct just_identity{{make_word_set({Word{}}, "1")}, "Q"};
  CHECK(e0.appears_within_orbit(b0.link_id(0), 0, just_identity));

  // a two-point swap cannot appear inside a single-point region
  CHECK_FALSE(e.appears_within_orbit(b.link_id(0), 1, just_identity));

  // the block action itself appears via the full staged product
  std::vector<std::uint64_t> sizes{b.alpha(1).size(), b.alpha(2).size()};
  StagedProduct q = make_q_stages(2, 1, b.schedule().K(1), sizes);
  for (std::uint64_t id = 0; id < e.support_size(); ++id)
    CHECK(e.appears_within_orbit(id, 1, q));
}

TEST_CASE("appearance statistic and its lower bound") {
  GluedTruncation b = desk_truncation();
  const Schedule& s = b.schedule();
  std::vector<std::uint64_t> sizes{b.alpha(1).size(), b.alpha(2).size()};
  StagedProduct q = make_q_stages(2, 1, s.K(1), sizes);

  for (std::uint64_t m : {1, 2}) {
    EmpiricalIRS e(b, m);
    Rational stat = e.appearance_statistic(1, q);
    // every block here has f(j) <= t = 2, so the bound is full mass
    std::uint64_t fact = 1;
    for (std::uint64_t i = 2; i <= m; ++i) fact *= i;
    std::uint64_t direct = 0;
    for (std::uint64_t j = 0; j < fact; ++j)
      if (s.f(j) <= 2) direct += b.block_size(j) + 1;
    std::uint64_t weighted = 0;
    for (std::uint32_t nn = 1; nn <= 2; ++nn) weighted += s.g(nn) * s.count_below(nn, fact);
    CHECK(direct == weighted);
    CHECK(stat >= Rational(static_cast<long long>(direct),
                           static_cast<long long>(e.support_size())));
    CHECK(stat == Rational(1));
  }

  // deterministic under parallel evaluation
  EmpiricalIRS e(b, 2);
  CHECK(e.appearance_statistic(1, q, 1) == e.appearance_statistic(1, q, 4));
}

TEST_CASE("the statistic also holds for the wider second index") {
  std::map<std::uint32_t, std::uint64_t> g = cyclic_weights(4);
  Schedule s = Schedule::build(g, 4, 2 * 71280);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 4);
  GluedTruncation b(alphas, s, 720 + 6 * 36);
  const std::uint32_t n = 2, t = 4;
  std::vector<std::uint64_t> sizes;
  for (std::uint32_t i = 1; i <= t; ++i) sizes.push_back(b.alpha(i).size());
  StagedProduct q = make_q_stages(t, n, s.K(n), sizes);

  EmpiricalIRS e(b, 5);
  CHECK(e.appearance_statistic(n, q, 4) == Rational(1));

  // explicit witness chains across whole K_2-intervals, sampled
  EmpiricalIRS e6(b, 6);
  for (std::uint64_t id = 0; id < e6.support_size(); id += 7) {
    GluedPoint p = b.point_of(id);
    REQUIRE(s.f(p.block) <= t);
    NavigationWitness w = navigate(b, p, n, t);
    CHECK(replay_navigation(b, w));
    CHECK(s.f(w.l) == n);
  }
}

TEST_CASE("staged orbits that leave the truncation are refused") {
  Schedule s = Schedule::build(cyclic_weights(2), 2, 200);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 2);
  GluedTruncation b(alphas, s, 3);
  EmpiricalIRS e(b, 2);
  std::vector<std::uint64_t> sizes{b.alpha(1).size(), b.alpha(2).size()};
  StagedProduct q = make_q_stages(2, 1, s.K(1), sizes);
  CHECK_THROWS_AS(e.appears_within_orbit(b.link_id(1), 1, q), std::invalid_argument);
}
