#ifndef IRS_APPEARANCE_HPP
#define IRS_APPEARANCE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

#include "irs/finite_action.hpp"
#include "irs/glue.hpp"
#include "irs/rational.hpp"
#include "irs/word.hpp"

namespace irs {

// An equivariant copy of a finite action inside a target region:
// image[v] is the target point carrying source point v.
struct Embedding {
  std::vector<std::uint64_t> image;
  std::uint64_t base_source = 0;
  std::uint64_t base_target = 0;
};

// Raised when a step of the glued action cannot be resolved within the
// schedule horizon; regions passed to the searches must avoid this.
struct UnresolvedStep : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Point-wise views of the two target kinds the searches accept.  step()
// returns nullopt when the image provably leaves the truncation.
class FiniteView {
 public:
  explicit FiniteView(const FiniteAction& a) : a_(&a) {}
  std::optional<std::uint64_t> step(std::uint64_t id, std::uint32_t gen, bool inverse) const {
    return a_->apply_gen(gen, id, inverse);
  }

 private:
  const FiniteAction* a_;
};

class GluedView {
 public:
  explicit GluedView(const GluedTruncation& b) : b_(&b) {}
  std::optional<std::uint64_t> step(std::uint64_t id, std::uint32_t gen, bool inverse) const {
    StepResult r = b_->step(id, gen, inverse);
    if (r.status == StepStatus::exits_truncation) return std::nullopt;
    if (r.status == StepStatus::unresolved)
      throw UnresolvedStep("glued action unresolved at point " + b_->point_of(id).str() +
                           " under g" + std::to_string(gen));
    return r.id;
  }

 private:
  const GluedTruncation* b_;
};

// Searches for an equivariant embedding of the transitive action alpha
// (relative to n) into the target within the given region.  From each
// candidate image of a fixed base point the rest of the map is forced
// along the Schreier graph of alpha; candidates are tried in increasing
// point order and the first success is returned, so the search is
// deterministic.  Returns nullopt when no embedding exists.
template <class View>
std::optional<Embedding> appears_in(const FiniteAction& alpha, std::uint32_t n,
                                    const View& target, std::span<const std::uint64_t> region) {
  if (alpha.size() == 0) throw std::invalid_argument("appears_in: empty source action");
  if (auto ms = alpha.max_support(); ms && *ms > n)
    throw std::invalid_argument("appears_in: source action moves g_k with k > n");
  if (!is_transitive(alpha)) throw std::invalid_argument("appears_in: source must be transitive");

  std::vector<std::uint64_t> candidates(region.begin(), region.end());
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::unordered_set<std::uint64_t> in_region(candidates.begin(), candidates.end());

  const std::uint64_t V = alpha.size();
  for (std::uint64_t w0 : candidates) {
    std::vector<std::uint64_t> image(V, ~std::uint64_t{0});
    std::unordered_set<std::uint64_t> used;
    std::vector<std::uint64_t> queue{0};
    image[0] = w0;
    used.insert(w0);
    bool ok = true;
    for (std::size_t qi = 0; ok && qi < queue.size(); ++qi) {
      const std::uint64_t v = queue[qi];
      for (std::uint32_t gen = 0; ok && gen <= n; ++gen) {
        for (bool inverse : {false, true}) {
          const std::uint64_t v2 = alpha.apply_gen(gen, v, inverse);
          const auto w2 = target.step(image[v], gen, inverse);
          if (!w2 || !in_region.count(*w2)) {
            ok = false;
            break;
          }
          if (image[v2] != ~std::uint64_t{0}) {
            if (image[v2] != *w2) {
              ok = false;
              break;
            }
          } else {
            if (used.count(*w2)) {
              ok = false;
              break;
            }
            image[v2] = *w2;
            used.insert(*w2);
            queue.push_back(v2);
          }
        }
      }
    }
    if (!ok) continue;
    Embedding e;
    e.image = std::move(image);
    e.base_source = 0;
    e.base_target = w0;
    return e;
  }
  return std::nullopt;
}

// Re-verifies the two defining conditions: the image is closed under
// g_0..g_n inside the region and the map intertwines the actions.
template <class View>
bool embedding_valid(const FiniteAction& alpha, std::uint32_t n, const View& target,
                     std::span<const std::uint64_t> region, const Embedding& e) {
  if (e.image.size() != alpha.size()) return false;
  std::unordered_set<std::uint64_t> in_region(region.begin(), region.end());
  std::unordered_set<std::uint64_t> image_set(e.image.begin(), e.image.end());
  if (image_set.size() != e.image.size()) return false;
  for (auto w : e.image)
    if (!in_region.count(w)) return false;
  for (std::uint64_t v = 0; v < alpha.size(); ++v) {
    for (std::uint32_t gen = 0; gen <= n; ++gen) {
      for (bool inverse : {false, true}) {
        const auto w2 = target.step(e.image[v], gen, inverse);
        if (!w2 || !image_set.count(*w2)) return false;
        if (*w2 != e.image[alpha.apply_gen(gen, v, inverse)]) return false;
      }
    }
  }
  return true;
}

// The witness chain produced by the staged navigation: words from the five
// stages whose composite carries v into the target block, plus one word
// per target point showing the final block is covered.
struct NavigationWitness {
  GluedPoint start;
  std::uint64_t j = 0;   // block of the start point
  std::uint64_t l = 0;   // target block, f(l) = n, same K_n-interval as j
  std::uint32_t n = 0;
  std::uint32_t t = 0;
  std::uint64_t K = 0;
  Word to_marked;        // stage 1, lands on the marked point of block j
  Word to_link;          // stage 2, lands on u_j
  Word across;           // stage 3, lands on u_l
  Word into_block;       // stage 4, lands in W_l
  GluedPoint entry;      // where stage 4 lands
  std::vector<Word> cover;  // stage 5, cover[i] carries entry to point i of W_l
};

struct NavigationError : std::runtime_error {
  std::string stage;
  std::uint64_t frontier = 0;
  NavigationError(std::string stage_, std::uint64_t frontier_, const std::string& what)
      : std::runtime_error(what), stage(std::move(stage_)), frontier(frontier_) {}
};

// Builds the witness chain for start point v (in block j with f(j) <= t)
// and target parameter n.  Throws NavigationError, naming the failing
// stage and the frontier size it reached, when a stage target cannot be
// reached within its word length cap.
NavigationWitness navigate(const GluedTruncation& b, const GluedPoint& v, std::uint32_t n,
                           std::uint32_t t);

// Replays every word of the witness through the glued action and checks
// the stage caps; true iff the whole chain verifies.
bool replay_navigation(const GluedTruncation& b, const NavigationWitness& w);

// A finite partial assignment T -> {0,1}; stands for the cylinder set of
// configurations agreeing with it.
struct CylinderSpec {
  std::map<std::uint64_t, bool> values;
};

// Exact product measure of (shift by g applied to the rho-cylinder)
// intersected with the sigma-cylinder, for the shift action induced by
// alpha extended by the identity.
Rational shift_cylinder_measure(const FiniteAction& alpha, const Word& g,
                                const CylinderSpec& rho, const CylinderSpec& sigma);

// True iff the two actions agree pointwise on T for every g_k with k < n.
bool check_truncation_agreement(const FiniteAction& alpha, const FiniteAction& alpha_hat,
                                std::uint32_t n, std::span<const std::uint64_t> T);

// The finitely many cylinder inequalities defining the weak neighborhood:
// |mu(s_alpha(g_k) N_rho cap N_sigma) - mu(s_other(g_k) N_rho cap N_sigma)|
// < eps for all rho, sigma over T and k < n.  Exhaustive over 2^|T| pairs,
// so |T| must stay small.
bool cylinder_neighborhood_contains(const FiniteAction& alpha, const FiniteAction& other,
                                    std::uint32_t n, const Rational& eps,
                                    std::span<const std::uint64_t> T);

}  // namespace irs

#endif
