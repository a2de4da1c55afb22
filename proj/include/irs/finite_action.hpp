#ifndef IRS_FINITE_ACTION_HPP
#define IRS_FINITE_ACTION_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "irs/word.hpp"

namespace irs {

struct Permutation {
  std::vector<std::uint64_t> fwd;
  std::vector<std::uint64_t> inv;
};

// Action of the free group on {0..size-1} in which only finitely many
// generators act; generators absent from the map act as the identity.
// Immutable after construction.
class FiniteAction {
 public:
  FiniteAction() = default;
  FiniteAction(std::uint64_t size,
               const std::map<std::uint32_t, std::vector<std::uint64_t>>& perms);

  std::uint64_t size() const { return size_; }
  const std::map<std::uint32_t, Permutation>& perms() const { return perms_; }
  std::vector<std::uint32_t> support() const;
  std::optional<std::uint32_t> max_support() const;

  std::uint64_t apply_gen(std::uint32_t gen, std::uint64_t v, bool inverse = false) const;
  // Letters act right to left: apply(uv, x) = apply(u, apply(v, x)).
  std::uint64_t apply(const Word& w, std::uint64_t v) const;
  // Extension by the identity to all of N; points >= size() never move.
  std::uint64_t apply_extended(const Word& w, std::uint64_t v) const;
  bool stabilizes(const Word& w, std::uint64_t v) const;

 private:
  std::uint64_t size_ = 0;
  std::map<std::uint32_t, Permutation> perms_;
};

struct OrbitPartition {
  std::vector<std::vector<std::uint64_t>> classes;
};

// Orbits of {0..size-1} under the listed generators and their inverses.
OrbitPartition orbit_partition(const FiniteAction& a, std::span<const std::uint32_t> generators);

bool is_transitive(const FiniteAction& a);

// The action on the given subset, reindexed to 0..|subset|-1.  Throws,
// naming a violating (generator, point) pair, when the subset is not
// closed under the supported permutations.
FiniteAction restrict_to_invariant(const FiniteAction& a, std::span<const std::uint64_t> subset);

// Example generators for the block action sequence.  The sequence the
// construction calls for exists but is not exhibited, so everything
// downstream is parametric in a user-supplied family.
FiniteAction cyclic_action(std::uint32_t n);      // g_0 cycles n+1 points
FiniteAction cyclic_top_action(std::uint32_t n);  // g_n cycles n+1 points
// g_n is a random full cycle (hence transitive), g_0..g_{n-1} random
// permutations; deterministic for a fixed seed.
FiniteAction random_transitive_action(std::uint32_t n, std::uint64_t size, std::uint64_t seed);

struct AlphaFamilySpec {
  enum class Kind { cyclic, cyclic_top, random };
  Kind kind = Kind::cyclic_top;
  std::uint64_t seed = 0;
  std::map<std::uint32_t, std::uint64_t> sizes;  // overrides; default |V_n| = n+1
};

std::map<std::uint32_t, FiniteAction> build_alpha_family(const AlphaFamilySpec& spec,
                                                         std::uint32_t max_n);

// g(n) = |V_n| + 1
std::map<std::uint32_t, std::uint64_t> family_weights(
    const std::map<std::uint32_t, FiniteAction>& alphas);

}  // namespace irs

#endif
