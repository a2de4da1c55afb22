#ifndef IRS_GLUE_HPP
#define IRS_GLUE_HPP

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "irs/finite_action.hpp"
#include "irs/schedule.hpp"
#include "irs/word.hpp"

namespace irs {

// A point of the truncated glued action: either a block point (block j,
// index i inside the block) or the linking point u_j above block j.
struct GluedPoint {
  enum class Tag : std::uint8_t { block, link };
  Tag tag = Tag::block;
  std::uint64_t block = 0;
  std::uint64_t index = 0;  // meaningful for block points only

  friend constexpr auto operator<=>(const GluedPoint&, const GluedPoint&) = default;

  std::string str() const;                        // "w:3:0" or "u:5"
  static GluedPoint parse(std::string_view text);
};

enum class StepStatus : std::uint8_t {
  ok,
  exits_truncation,  // the rule is known and its target lies outside T_M
  unresolved,        // the rule needs f beyond the schedule horizon
};

struct StepResult {
  StepStatus status = StepStatus::ok;
  std::uint64_t id = 0;  // valid iff status == ok
};

struct ApplyResult {
  StepStatus status = StepStatus::ok;
  GluedPoint point;  // valid iff status == ok
};

struct InvariantPrefix {
  std::uint64_t stage = 0;  // the m of T_{m!}
  std::uint64_t size = 0;   // point ids [0, size) form the certified set
};

struct OrbitResult {
  std::vector<std::uint64_t> ids;  // sorted
  bool exited = false;
  bool unresolved = false;
};

// The glued action restricted to the first M blocks and their linking
// points.  Edge rules, with all generators indexed into g_0, g_1, ...:
//
//   * g_k acts on block j as the block action when k <= f(j);
//   * g_{f(j)+1} transposes the marked point of block j with u_j;
//   * g_{l_j} transposes the marked points of blocks j and j+1, where
//     l_j is the least index exceeding l_{j-1} and max(j, f(0..j+1)) + 1;
//   * for n >= 1, g_n cycles, in increasing order with wraparound, the
//     u_j with j in [kn, (k+1)n) and f(j)+1 != n; u_j with f(j)+1 = n are
//     skipped because g_n already links them downward.
//
// The marked point of every block is index 0.  Rules whose target falls
// outside T_M report exits_truncation; rules needing f beyond the horizon
// report unresolved.  All other points are fixed.
class GluedTruncation {
 public:
  GluedTruncation(std::map<std::uint32_t, FiniteAction> alphas, Schedule schedule,
                  std::uint64_t blocks);

  std::uint64_t blocks() const { return blocks_; }
  std::uint64_t points() const { return offsets_.back(); }
  const Schedule& schedule() const { return schedule_; }
  const std::map<std::uint32_t, FiniteAction>& alphas() const { return alphas_; }
  const FiniteAction& alpha(std::uint32_t n) const;
  std::uint64_t block_size(std::uint64_t j) const;

  std::uint64_t link_generator(std::uint64_t j) const;   // f(j) + 1
  std::uint64_t chain_generator(std::uint64_t j) const;  // l_j
  const std::vector<std::uint64_t>& chain_generators() const { return l_; }

  std::uint64_t id_of(const GluedPoint& p) const;
  GluedPoint point_of(std::uint64_t id) const;
  std::uint64_t link_id(std::uint64_t j) const;               // id of u_j
  std::uint64_t block_id(std::uint64_t j, std::uint64_t i) const;

  StepResult step(std::uint64_t id, std::uint32_t gen, bool inverse) const;
  StepResult apply(const Word& w, std::uint64_t id) const;
  ApplyResult apply(const Word& w, const GluedPoint& p) const;

  // Returns T_{m!} and certifies its closure under g_0..g_m and inverses;
  // throws when closure fails, which would be a construction bug.
  InvariantPrefix invariant_prefix(std::uint64_t m) const;

  OrbitResult orbit(std::uint64_t id, const WordSet& words) const;
  OrbitResult orbit(std::uint64_t id, const StagedProduct& stages) const;

  // Moved points of each generator up to max_gen, as (source, target) id
  // pairs; targets outside T_M are omitted.  Identity edges never appear.
  std::map<std::uint32_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> realized_edges(
      std::uint32_t max_gen) const;

 private:
  std::map<std::uint32_t, FiniteAction> alphas_;
  Schedule schedule_;
  std::uint64_t blocks_ = 0;
  std::vector<std::uint64_t> offsets_;  // offsets_[j] = id of block j's first point
  std::vector<std::uint64_t> l_;

  StepResult top_cycle_step(std::uint32_t gen, std::uint64_t j, bool inverse) const;
  void check_no_double_assignment() const;
};

GluedTruncation assemble(std::map<std::uint32_t, FiniteAction> alphas, Schedule schedule,
                         std::uint64_t blocks);

}  // namespace irs

#endif
