#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "irs/glue.hpp"
#include "irs/json_io.hpp"

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

// The construction picture: block 3 carries the action with index 5, so
// g_6 both links u_3 downward and skips it in the first top cycle.
GluedTruncation figure_truncation() {
  std::vector<std::uint32_t> f{1, 1, 1, 5, 1, 1, 1, 1, 1, 1, 1, 1};
  Schedule s = Schedule::from_values(f, {{1, 2}}, {{1, 3}, {5, 7}});
  std::map<std::uint32_t, FiniteAction> alphas{{1, cyclic_top_action(1)},
                                               {5, cyclic_top_action(5)}};
  return GluedTruncation(alphas, s, 6);
}

}  // namespace

TEST_CASE("point ids interleave blocks and linking points") {
  GluedTruncation b = desk_truncation();
  CHECK(b.points() == b.schedule().C(b.blocks()));
  for (std::uint64_t j = 0; j < b.blocks(); ++j)
    CHECK(b.block_size(j) == b.alpha(b.schedule().f(j)).size());
  // round trips
  for (std::uint64_t id = 0; id < b.points(); ++id)
    CHECK(b.id_of(b.point_of(id)) == id);
  GluedPoint u5{GluedPoint::Tag::link, 5, 0};
  CHECK(b.point_of(b.id_of(u5)) == u5);
  CHECK(GluedPoint::parse("w:3:1").str() == "w:3:1");
  CHECK(GluedPoint::parse("u:7").str() == "u:7");
  CHECK_THROWS_AS(GluedPoint::parse("x:1"), std::invalid_argument);
}

TEST_CASE("chain indices are least admissible and increasing") {
  GluedTruncation b = desk_truncation();
  const Schedule& s = b.schedule();
  std::uint64_t prev = 0;
  for (std::uint64_t j = 0; j < b.blocks(); ++j) {
    std::uint64_t bound = j;
    for (std::uint64_t i = 0; i <= j + 1; ++i)
      bound = std::max<std::uint64_t>(bound, s.f(i));
    CHECK(b.chain_generator(j) > bound + 1);
    if (j > 0) CHECK(b.chain_generator(j) > prev);
    // least admissible: one less violates a constraint
    CHECK((b.chain_generator(j) - 1 <= bound + 1 || b.chain_generator(j) - 1 <= prev));
    prev = b.chain_generator(j);
  }
  // with f = 1 on 0..5, the chain starts at g_3
  CHECK(b.chain_generator(0) == 3);
  CHECK(b.chain_generator(1) == 4);
}

TEST_CASE("links transpose marked points with linking points") {
  GluedTruncation b = desk_truncation();
  const auto g = static_cast<std::uint32_t>(b.link_generator(0));
  GluedPoint w0{GluedPoint::Tag::block, 0, 0};
  auto r = b.apply(Word::generator(g), w0);
  REQUIRE(r.status == StepStatus::ok);
  CHECK(r.point == GluedPoint{GluedPoint::Tag::link, 0, 0});
  auto back = b.apply(Word::generator(g), r.point);
  REQUIRE(back.status == StepStatus::ok);
  CHECK(back.point == w0);
  // transposition squared
  auto twice = b.apply(Word::generator(g, 2), w0);
  REQUIRE(twice.status == StepStatus::ok);
  CHECK(twice.point == w0);
  // identity word
  auto id = b.apply(Word{}, w0);
  CHECK(id.point == w0);
}

TEST_CASE("the chain edge at the last block exits the truncation") {
  GluedTruncation b = desk_truncation();
  const auto g = static_cast<std::uint32_t>(b.chain_generator(b.blocks() - 1));
  GluedPoint top{GluedPoint::Tag::block, b.blocks() - 1, 0};
  auto r = b.apply(Word::generator(g), top);
  CHECK(r.status == StepStatus::exits_truncation);
}

TEST_CASE("block actions agree with the glued steps") {
  GluedTruncation b = desk_truncation();
  for (std::uint64_t j = 0; j < b.blocks(); ++j) {
    const std::uint32_t fj = b.schedule().f(j);
    const FiniteAction& a = b.alpha(fj);
    for (std::uint32_t k = 0; k <= fj; ++k) {
      for (std::uint64_t x = 0; x < a.size(); ++x) {
        StepResult r = b.step(b.block_id(j, x), k, false);
        REQUIRE(r.status == StepStatus::ok);
        CHECK(r.id == b.block_id(j, a.apply_gen(k, x)));
      }
    }
    // a generator above the link index fixes non-marked points
    StepResult fixed = b.step(b.block_id(j, 1), static_cast<std::uint32_t>(fj + 5), false);
    CHECK(fixed.id == b.block_id(j, 1));
  }
}

TEST_CASE("the construction picture: g_6 skips u_3 inside its first top cycle") {
  GluedTruncation b = figure_truncation();
  auto at = [&](std::uint64_t j) { return GluedPoint{GluedPoint::Tag::link, j, 0}; };
  // cycle over {0,1,2,4,5}: increasing order with wraparound
  auto expect = [&](std::uint64_t from, std::uint64_t to) {
    auto r = b.apply(Word::generator(6), at(from));
    REQUIRE(r.status == StepStatus::ok);
    CHECK(r.point == at(to));
  };
  expect(0, 1);
  expect(1, 2);
  expect(2, 4);
  expect(4, 5);
  expect(5, 0);
  // the skipped point goes down its link instead
  auto down = b.apply(Word::generator(6), at(3));
  REQUIRE(down.status == StepStatus::ok);
  CHECK(down.point == GluedPoint{GluedPoint::Tag::block, 3, 0});
  // and the DOT output shows the skip
  std::string dot = truncation_to_dot(b, {6});
  CHECK(dot.find("u2 -> u4") != std::string::npos);
  CHECK(dot.find("u2 -> u3") == std::string::npos);
  CHECK(dot.find("W3 -> u3 [dir=none, label=\"g6\"]") != std::string::npos);
}

TEST_CASE("singleton top cycles fix their point") {
  GluedTruncation b = desk_truncation();
  // g_1 cycles single-element intervals
  for (std::uint64_t j = 0; j < b.blocks(); ++j) {
    StepResult r = b.step(b.link_id(j), 1, false);
    if (b.link_generator(j) != 1) CHECK(r.id == b.link_id(j));
  }
  // g_0 never moves linking points
  for (std::uint64_t j = 0; j < b.blocks(); ++j)
    CHECK(b.step(b.link_id(j), 0, false).id == b.link_id(j));
}

TEST_CASE("certified prefixes are closed and have the stated size") {
  GluedTruncation b = desk_truncation();
  for (std::uint64_t m = 0; m <= 3; ++m) {
    InvariantPrefix p = b.invariant_prefix(m);
    std::uint64_t fact = 1;
    for (std::uint64_t i = 2; i <= m; ++i) fact *= i;
    CHECK(p.size == b.schedule().C(fact));
    // closure, rechecked here point by point
    for (std::uint64_t id = 0; id < p.size; ++id) {
      for (std::uint32_t gen = 0; gen <= m; ++gen) {
        for (bool inv : {false, true}) {
          StepResult r = b.step(id, gen, inv);
          REQUIRE(r.status == StepStatus::ok);
          CHECK(r.id < p.size);
        }
      }
    }
  }
  CHECK_THROWS_AS(b.invariant_prefix(4), std::invalid_argument);  // 24 > 20 blocks
}

TEST_CASE("each generator is injective on the certified prefix") {
  GluedTruncation b = desk_truncation();
  InvariantPrefix p = b.invariant_prefix(3);
  for (std::uint32_t gen = 0; gen <= 3; ++gen) {
    std::set<std::uint64_t> images;
    for (std::uint64_t id = 0; id < p.size; ++id)
      images.insert(b.step(id, gen, false).id);
    CHECK(images.size() == p.size);
  }
}

TEST_CASE("the realized edge graph connects the whole truncation") {
  GluedTruncation b = desk_truncation(12);
  std::set<std::uint64_t> seen{0};
  std::vector<std::uint64_t> queue{0};
  const std::uint32_t cap = static_cast<std::uint32_t>(b.chain_generator(b.blocks() - 2));
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    for (std::uint32_t gen = 0; gen <= cap; ++gen) {
      for (bool inv : {false, true}) {
        StepResult r = b.step(queue[qi], gen, inv);
        if (r.status == StepStatus::ok && seen.insert(r.id).second) queue.push_back(r.id);
      }
    }
  }
  CHECK(seen.size() == b.points());
}

TEST_CASE("skip coordination: at most one of gK, g2K, g3K skips a linking point") {
  GluedTruncation b = desk_truncation();
  for (std::uint32_t n = 1; n <= 2; ++n) {
    const std::uint64_t K = b.schedule().K(n);
    for (std::uint64_t d = 0; d < b.blocks(); ++d) {
      int skips = 0;
      for (std::uint64_t mult : {K, 2 * K, 3 * K})
        if (b.link_generator(d) == mult) ++skips;
      CHECK(skips <= 1);
    }
  }
}

TEST_CASE("orbits") {
  GluedTruncation b = desk_truncation();
  GluedPoint w0{GluedPoint::Tag::block, 0, 0};

  OrbitResult only = b.orbit(b.id_of(w0), make_word_set({Word{}}, "identity"));
  CHECK(only.ids == std::vector<std::uint64_t>{b.id_of(w0)});

  const auto g = static_cast<std::uint32_t>(b.link_generator(0));
  OrbitResult link = b.orbit(b.id_of(w0), make_word_set({Word::generator(g)}, "link"));
  CHECK(link.ids == std::vector<std::uint64_t>{b.link_id(0)});

  // powers of a top-cycle generator sweep out the eligible set; g_3 cycles
  // {u_0, u_1, u_2} because no block there carries index 2
  std::vector<Word> powers;
  for (int e = -4; e <= 4; ++e)
    if (e != 0) powers.push_back(Word::generator(3, e));
  OrbitResult cyc = b.orbit(b.link_id(0), make_word_set(std::move(powers), "powers"));
  std::set<std::uint64_t> expect;
  for (std::uint64_t d = 0; d < 3; ++d) {
    REQUIRE(b.link_generator(d) != 3);
    expect.insert(b.link_id(d));
  }
  CHECK(std::set<std::uint64_t>(cyc.ids.begin(), cyc.ids.end()) == expect);
}

TEST_CASE("staged orbits match materialized products") {
  GluedTruncation b = desk_truncation();
  std::vector<std::uint32_t> low{0, 1, 2};
  WordSet explicit_ball = ball(low, 2);
  WordSet links = make_word_set({Word{}, Word::generator(3)}, "step");

  StagedProduct staged;
  staged.stages.emplace_back(BallStage{low, 2, "ball"});
  staged.stages.emplace_back(links);

  // materialize the product: apply the ball first, then the explicit set
  std::vector<Word> product;
  for (const auto& s2 : links.words)
    for (const auto& s1 : explicit_ball.words) product.push_back(s2 * s1);
  WordSet flat = make_word_set(std::move(product), "flat");

  for (std::uint64_t id : {b.id_of(GluedPoint{GluedPoint::Tag::block, 3, 1}), b.link_id(7)}) {
    OrbitResult lhs = b.orbit(id, staged);
    OrbitResult rhs = b.orbit(id, flat);
    CHECK(lhs.ids == rhs.ids);
  }
}

TEST_CASE("realized edges agree with the step function") {
  GluedTruncation b = desk_truncation(8);
  auto edges = b.realized_edges(12);
  CHECK(!edges.empty());
  for (const auto& [gen, list] : edges) {
    for (const auto& [from, to] : list) {
      CHECK(from != to);
      StepResult r = b.step(from, gen, false);
      REQUIRE(r.status == StepStatus::ok);
      CHECK(r.id == to);
    }
  }
  json j = truncation_to_json(b, 12);
  CHECK(j.at("blocks") == 8);
  CHECK(j.at("points") == b.points());
}

TEST_CASE("assembly validations") {
  Schedule s = Schedule::build(cyclic_weights(2), 2, 200);
  auto alphas = build_alpha_family({AlphaFamilySpec::Kind::cyclic_top, 0, {}}, 2);

  CHECK_THROWS_AS(GluedTruncation(alphas, s, 0), std::invalid_argument);
  CHECK_THROWS_AS(GluedTruncation(alphas, s, 200), std::invalid_argument);

  auto missing = alphas;
  missing.erase(2);
  CHECK_THROWS_AS(GluedTruncation(missing, s, 20), std::invalid_argument);

  auto lazy = alphas;
  lazy[1] = FiniteAction(2, {});  // two fixed points, not transitive
  CHECK_THROWS_AS(GluedTruncation(lazy, s, 20), std::invalid_argument);

  auto wide = alphas;
  wide[1] = FiniteAction(2, {{4, {1, 0}}});  // supported beyond its index
  CHECK_THROWS_AS(GluedTruncation(wide, s, 20), std::invalid_argument);
}
