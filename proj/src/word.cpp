#include "irs/word.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <sstream>
#include <stdexcept>

namespace irs {

void Word::push(std::uint32_t gen, std::int64_t exp) {
  if (exp == 0) return;
  if (!letters_.empty() && letters_.back().gen == gen) {
    letters_.back().exp += exp;
    if (letters_.back().exp == 0) letters_.pop_back();
    return;
  }
  letters_.push_back({gen, exp});
}

Word Word::generator(std::uint32_t gen, std::int64_t exp) {
  Word w;
  w.push(gen, exp);
  return w;
}

Word Word::from_letters(std::span<const Letter> letters) {
  Word w;
  for (const auto& l : letters) w.push(l.gen, l.exp);
  return w;
}

std::uint64_t Word::length() const {
  std::uint64_t n = 0;
  for (const auto& l : letters_) n += static_cast<std::uint64_t>(std::llabs(l.exp));
  return n;
}

std::optional<std::uint32_t> Word::max_generator() const {
  std::optional<std::uint32_t> m;
  for (const auto& l : letters_)
    if (!m || l.gen > *m) m = l.gen;
  return m;
}

Word Word::inverse() const {
  Word w;
  for (auto it = letters_.rbegin(); it != letters_.rend(); ++it) w.push(it->gen, -it->exp);
  return w;
}

Word& Word::operator*=(const Word& rhs) {
  for (const auto& l : rhs.letters_) push(l.gen, l.exp);
  return *this;
}

Word Word::conjugated_by(const Word& g) const { return g * *this * g.inverse(); }

std::string Word::str() const {
  if (letters_.empty()) return "1";
  std::ostringstream out;
  bool first = true;
  for (const auto& l : letters_) {
    if (!first) out << ' ';
    first = false;
    out << 'g' << l.gen;
    if (l.exp != 1) out << '^' << l.exp;
  }
  return out.str();
}

Word Word::parse(std::string_view text) {
  Word w;
  std::size_t pos = 0;
  auto skip_ws = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  skip_ws();
  while (pos < text.size()) {
    if (text[pos] == '1') {
      ++pos;
      skip_ws();
      continue;
    }
    if (text[pos] != 'g')
      throw std::invalid_argument("word parse: expected 'g' at position " + std::to_string(pos) +
                                  " in \"" + std::string(text) + "\"");
    ++pos;
    std::uint32_t gen = 0;
    auto [p1, e1] = std::from_chars(text.data() + pos, text.data() + text.size(), gen);
    if (e1 != std::errc{} || p1 == text.data() + pos)
      throw std::invalid_argument("word parse: bad generator index in \"" + std::string(text) + "\"");
    pos = static_cast<std::size_t>(p1 - text.data());
    std::int64_t exp = 1;
    if (pos < text.size() && text[pos] == '^') {
      ++pos;
      auto [p2, e2] = std::from_chars(text.data() + pos, text.data() + text.size(), exp);
      if (e2 != std::errc{} || p2 == text.data() + pos)
        throw std::invalid_argument("word parse: bad exponent in \"" + std::string(text) + "\"");
      pos = static_cast<std::size_t>(p2 - text.data());
    }
    w.push(gen, exp);
    skip_ws();
  }
  return w;
}

bool WordSet::contains(const Word& w) const {
  return std::binary_search(words.begin(), words.end(), w);
}

WordSet make_word_set(std::vector<Word> words, std::string description) {
  std::sort(words.begin(), words.end());
  words.erase(std::unique(words.begin(), words.end()), words.end());
  return WordSet{std::move(words), std::move(description)};
}

namespace {

// Size of the ball: 1 + sum_{l=1..L} 2k (2k-1)^(l-1) for k generators.
std::uint64_t ball_size_bound(std::size_t k, std::uint64_t max_length) {
  constexpr std::uint64_t kLimit = 5'000'000;
  std::uint64_t total = 1, layer = 1;
  for (std::uint64_t l = 1; l <= max_length; ++l) {
    layer *= (l == 1) ? 2 * k : 2 * k - 1;
    total += layer;
    if (total > kLimit) return total;
  }
  return total;
}

}  // namespace

WordSet ball(std::span<const std::uint32_t> generators, std::uint64_t max_length,
             std::string description) {
  if (generators.empty()) throw std::invalid_argument("ball: empty generator set");
  std::vector<std::uint32_t> gens(generators.begin(), generators.end());
  std::sort(gens.begin(), gens.end());
  gens.erase(std::unique(gens.begin(), gens.end()), gens.end());

  if (ball_size_bound(gens.size(), max_length) > 5'000'000)
    throw std::invalid_argument("ball: too large to materialize (generators=" +
                                std::to_string(gens.size()) +
                                ", length=" + std::to_string(max_length) + ")");

  std::vector<Word> out{Word{}};
  // Grow layer by layer; a reduced word of length l extends to length l+1 by
  // any letter that does not cancel against its last letter.
  std::vector<Word> layer{Word{}};
  for (std::uint64_t l = 1; l <= max_length; ++l) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (auto g : gens) {
        for (int sign : {+1, -1}) {
          if (!w.letters().empty()) {
            const Letter& last = w.letters().back();
            if (last.gen == g && ((last.exp > 0) != (sign > 0))) continue;
          }
          next.push_back(w * Word::generator(g, sign));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return make_word_set(std::move(out), std::move(description));
}

SSets make_s_sets(std::uint32_t t, std::uint32_t n, std::uint64_t K,
                  std::span<const std::uint64_t> v_sizes) {
  if (K == 0) throw std::invalid_argument("make_s_sets: K must be positive");
  if (v_sizes.empty()) throw std::invalid_argument("make_s_sets: empty V sizes");
  if (n < 1 || t < n) throw std::invalid_argument("make_s_sets: need t >= n >= 1");
  if (v_sizes.size() < t) throw std::invalid_argument("make_s_sets: V sizes must cover 1..t");

  std::uint64_t max_v = 0;
  for (std::uint32_t j = 1; j <= t; ++j) max_v = std::max(max_v, v_sizes[j - 1]);

  std::vector<std::uint32_t> low(t + 1);
  for (std::uint32_t i = 0; i <= t; ++i) low[i] = i;
  SSets s;
  s.s1 = ball(low, max_v, "S1");

  std::vector<Word> s2{Word{}};
  for (std::uint32_t i = 0; i <= t + 1; ++i) s2.push_back(Word::generator(i));
  s.s2 = make_word_set(std::move(s2), "S2");

  if (K > static_cast<std::uint64_t>(UINT32_MAX) / 3)
    throw std::invalid_argument("make_s_sets: K too large");
  std::vector<std::uint32_t> ks{static_cast<std::uint32_t>(K), static_cast<std::uint32_t>(2 * K),
                                static_cast<std::uint32_t>(3 * K)};
  s.s3 = ball(ks, 3 * K, "S3");

  s.s4 = make_word_set({Word::generator(n + 1)}, "S4");

  std::vector<std::uint32_t> mid;
  for (std::uint32_t i = 1; i <= n; ++i) mid.push_back(i);
  s.s5 = ball(mid, v_sizes[n - 1], "S5");
  return s;
}

StagedProduct make_q_stages(std::uint32_t t, std::uint32_t n, std::uint64_t K,
                            std::span<const std::uint64_t> v_sizes) {
  if (K == 0) throw std::invalid_argument("make_q_stages: K must be positive");
  if (v_sizes.empty()) throw std::invalid_argument("make_q_stages: empty V sizes");
  if (n < 1 || t < n) throw std::invalid_argument("make_q_stages: need t >= n >= 1");
  if (v_sizes.size() < t) throw std::invalid_argument("make_q_stages: V sizes must cover 1..t");

  std::uint64_t max_v = 0;
  for (std::uint32_t j = 1; j <= t; ++j) max_v = std::max(max_v, v_sizes[j - 1]);

  StagedProduct q;
  q.description = "Q(t=" + std::to_string(t) + ",n=" + std::to_string(n) + ")";

  std::vector<std::uint32_t> low(t + 1);
  for (std::uint32_t i = 0; i <= t; ++i) low[i] = i;
  q.stages.emplace_back(BallStage{std::move(low), max_v, "S1"});

  std::vector<Word> s2{Word{}};
  for (std::uint32_t i = 0; i <= t + 1; ++i) s2.push_back(Word::generator(i));
  q.stages.emplace_back(make_word_set(std::move(s2), "S2"));

  if (K > static_cast<std::uint64_t>(UINT32_MAX) / 3)
    throw std::invalid_argument("make_q_stages: K too large");
  std::vector<std::uint32_t> ks{static_cast<std::uint32_t>(K), static_cast<std::uint32_t>(2 * K),
                                static_cast<std::uint32_t>(3 * K)};
  q.stages.emplace_back(BallStage{std::move(ks), 3 * K, "S3"});

  q.stages.emplace_back(make_word_set({Word::generator(n + 1)}, "S4"));

  std::vector<std::uint32_t> mid;
  for (std::uint32_t i = 1; i <= n; ++i) mid.push_back(i);
  q.stages.emplace_back(BallStage{std::move(mid), v_sizes[n - 1], "S5"});
  return q;
}

}  // namespace irs
