#ifndef IRS_WORD_HPP
#define IRS_WORD_HPP

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace irs {

// One maximal run g^e inside a reduced word; e is never zero.
struct Letter {
  std::uint32_t gen = 0;
  std::int64_t exp = 0;
  friend constexpr auto operator<=>(const Letter&, const Letter&) = default;
};

// Freely reduced word over the generators g_0, g_1, ...  The empty word is
// the identity.  Reduction happens eagerly on every construction, so equal
// group elements always compare equal.
class Word {
 public:
  Word() = default;
  static Word generator(std::uint32_t gen, std::int64_t exp = 1);
  static Word from_letters(std::span<const Letter> letters);

  bool is_identity() const { return letters_.empty(); }
  const std::vector<Letter>& letters() const { return letters_; }

  // Number of letters, counting each letter of exponent +-1.
  std::uint64_t length() const;
  std::optional<std::uint32_t> max_generator() const;

  Word inverse() const;
  Word& operator*=(const Word& rhs);
  friend Word operator*(Word lhs, const Word& rhs) {
    lhs *= rhs;
    return lhs;
  }
  // g w g^-1
  Word conjugated_by(const Word& g) const;

  friend auto operator<=>(const Word&, const Word&) = default;

  // "g0 g1^-2 g3"; the identity prints as "1".
  std::string str() const;
  static Word parse(std::string_view text);

 private:
  std::vector<Letter> letters_;
  void push(std::uint32_t gen, std::int64_t exp);
};

struct WordSet {
  std::vector<Word> words;  // sorted, unique
  std::string description;

  std::size_t size() const { return words.size(); }
  bool contains(const Word& w) const;
};

WordSet make_word_set(std::vector<Word> words, std::string description);

// All reduced words of length at most max_length over the given generators
// and their inverses, identity included.  Throws when the set would exceed
// a few million words.
WordSet ball(std::span<const std::uint32_t> generators, std::uint64_t max_length,
             std::string description = "ball");

// A product stage explored by breadth-first search instead of being
// materialized; stands for the ball of the given radius.
struct BallStage {
  std::vector<std::uint32_t> generators;
  std::uint64_t max_length = 0;
  std::string description;
};

// Product of stages applied left to right: stages[0] acts on the start
// point first.
struct StagedProduct {
  std::vector<std::variant<WordSet, BallStage>> stages;
  std::string description;
};

struct SSets {
  WordSet s1, s2, s3, s4, s5;
};

// The five word sets of the staged navigation for parameters (t, n, K).
// v_sizes[j-1] holds |V_j| for 1 <= j <= t.  S_3 is materialized here and
// grows like 6 * 5^(3K-1), so callers keep K tiny; the staged form below
// is what navigation actually uses.
SSets make_s_sets(std::uint32_t t, std::uint32_t n, std::uint64_t K,
                  std::span<const std::uint64_t> v_sizes);

// Same parameters, but S_1, S_3 and S_5 stay symbolic ball stages and the
// product set is never materialized.
StagedProduct make_q_stages(std::uint32_t t, std::uint32_t n, std::uint64_t K,
                            std::span<const std::uint64_t> v_sizes);

}  // namespace irs

#endif
