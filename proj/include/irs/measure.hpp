#ifndef IRS_MEASURE_HPP
#define IRS_MEASURE_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "irs/glue.hpp"
#include "irs/rational.hpp"
#include "irs/word.hpp"

namespace irs {

// Basic clopen subset of the subgroup space: subgroups containing every
// in-word and no out-word.  Contradictory constraints are representable;
// such a set is empty and evaluates to zero.
struct ClopenSet {
  std::vector<Word> in_words;
  std::vector<Word> out_words;
  std::string id;

  bool contradictory() const;
  std::optional<std::uint32_t> max_generator() const;
};

ClopenSet conjugate_clopen(const ClopenSet& c, const Word& g);

struct InvarianceCheck {
  Rational conjugated;  // theta of g C g^-1
  Rational original;    // theta of C
  bool equal = false;
};

// The stage measure theta_m: the pushforward of the uniform measure on the
// certified invariant prefix T_{m!} under the stabilizer map.  Holds a
// reference to the truncation, which must outlive it.
class EmpiricalIRS {
 public:
  EmpiricalIRS(const GluedTruncation& b, std::uint64_t stage);

  std::uint64_t stage() const { return stage_; }
  std::uint64_t support_size() const { return size_; }
  const GluedTruncation& truncation() const { return *b_; }

  // Whether the word fixes the point; throws when the action cannot be
  // resolved on the support, which cannot happen for generators <= stage.
  bool word_fixes(const Word& w, std::uint64_t id) const;

  // Exact fraction of support points whose stabilizer lies in the set.
  Rational theta(const ClopenSet& c) const;

  // theta of the conjugated set against theta of the set; exact equality
  // is guaranteed when every generator index involved is <= stage, and the
  // call refuses larger indices rather than approximating.
  InvarianceCheck check_invariance(const ClopenSet& c, const Word& g) const;

  // Whether the block action alpha_n (relative to n) appears in the glued
  // action within the staged orbit of the point.  Throws when the orbit
  // computation leaves the truncation, i.e. the product set is too large
  // for the materialized blocks.
  bool appears_within_orbit(std::uint64_t id, std::uint32_t n, const StagedProduct& q) const;

  // Fraction of support points for which appears_within_orbit holds.
  Rational appearance_statistic(std::uint32_t n, const StagedProduct& q,
                                unsigned jobs = 1) const;

 private:
  const GluedTruncation* b_;
  std::uint64_t stage_ = 0;
  std::uint64_t size_ = 0;
};

}  // namespace irs

#endif
