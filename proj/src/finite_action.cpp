#include "irs/finite_action.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>

namespace irs {

FiniteAction::FiniteAction(std::uint64_t size,
                           const std::map<std::uint32_t, std::vector<std::uint64_t>>& perms)
    : size_(size) {
  for (const auto& [gen, images] : perms) {
    if (images.size() != size)
      throw std::invalid_argument("FiniteAction: permutation of g" + std::to_string(gen) +
                                  " has wrong length");
    Permutation p;
    p.fwd = images;
    p.inv.assign(size, size);
    for (std::uint64_t v = 0; v < size; ++v) {
      if (images[v] >= size)
        throw std::invalid_argument("FiniteAction: image out of range for g" +
                                    std::to_string(gen));
      if (p.inv[images[v]] != size)
        throw std::invalid_argument("FiniteAction: g" + std::to_string(gen) +
                                    " is not a bijection");
      p.inv[images[v]] = v;
    }
    perms_.emplace(gen, std::move(p));
  }
}

std::vector<std::uint32_t> FiniteAction::support() const {
  std::vector<std::uint32_t> out;
  out.reserve(perms_.size());
  for (const auto& [gen, p] : perms_) out.push_back(gen);
  return out;
}

std::optional<std::uint32_t> FiniteAction::max_support() const {
  if (perms_.empty()) return std::nullopt;
  return perms_.rbegin()->first;
}

std::uint64_t FiniteAction::apply_gen(std::uint32_t gen, std::uint64_t v, bool inverse) const {
  if (v >= size_) throw std::out_of_range("FiniteAction::apply_gen: unknown point");
  auto it = perms_.find(gen);
  if (it == perms_.end()) return v;
  return inverse ? it->second.inv[v] : it->second.fwd[v];
}

std::uint64_t FiniteAction::apply(const Word& w, std::uint64_t v) const {
  if (v >= size_) throw std::out_of_range("FiniteAction::apply: unknown point");
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    auto pit = perms_.find(it->gen);
    if (pit == perms_.end()) continue;
    const bool inverse = it->exp < 0;
    for (std::int64_t k = 0; k < std::llabs(it->exp); ++k)
      v = inverse ? pit->second.inv[v] : pit->second.fwd[v];
  }
  return v;
}

std::uint64_t FiniteAction::apply_extended(const Word& w, std::uint64_t v) const {
  if (v >= size_) return v;
  return apply(w, v);
}

bool FiniteAction::stabilizes(const Word& w, std::uint64_t v) const { return apply(w, v) == v; }

namespace {

struct UnionFind {
  std::vector<std::uint64_t> parent;
  explicit UnionFind(std::uint64_t n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  std::uint64_t find(std::uint64_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::uint64_t a, std::uint64_t b) { parent[find(a)] = find(b); }
};

}  // namespace

OrbitPartition orbit_partition(const FiniteAction& a, std::span<const std::uint32_t> generators) {
  UnionFind uf(a.size());
  for (auto gen : generators) {
    auto it = a.perms().find(gen);
    if (it == a.perms().end()) continue;
    for (std::uint64_t v = 0; v < a.size(); ++v) uf.unite(v, it->second.fwd[v]);
  }
  std::map<std::uint64_t, std::vector<std::uint64_t>> by_root;
  for (std::uint64_t v = 0; v < a.size(); ++v) by_root[uf.find(v)].push_back(v);
  OrbitPartition out;
  for (auto& [root, cls] : by_root) out.classes.push_back(std::move(cls));
  return out;
}

bool is_transitive(const FiniteAction& a) {
  if (a.size() == 0) throw std::invalid_argument("is_transitive: empty point set");
  auto gens = a.support();
  return orbit_partition(a, gens).classes.size() == 1;
}

FiniteAction restrict_to_invariant(const FiniteAction& a, std::span<const std::uint64_t> subset) {
  std::vector<std::uint64_t> pts(subset.begin(), subset.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  std::map<std::uint64_t, std::uint64_t> index;
  for (std::uint64_t i = 0; i < pts.size(); ++i) {
    if (pts[i] >= a.size()) throw std::out_of_range("restrict_to_invariant: unknown point");
    index[pts[i]] = i;
  }
  std::map<std::uint32_t, std::vector<std::uint64_t>> perms;
  for (const auto& [gen, p] : a.perms()) {
    std::vector<std::uint64_t> images(pts.size());
    for (std::uint64_t i = 0; i < pts.size(); ++i) {
      std::uint64_t img = p.fwd[pts[i]];
      auto it = index.find(img);
      if (it == index.end())
        throw std::invalid_argument("restrict_to_invariant: g" + std::to_string(gen) +
                                    " maps point " + std::to_string(pts[i]) +
                                    " outside the subset");
      images[i] = it->second;
    }
    perms.emplace(gen, std::move(images));
  }
  return FiniteAction(pts.size(), perms);
}

FiniteAction cyclic_action(std::uint32_t n) {
  std::uint64_t size = static_cast<std::uint64_t>(n) + 1;
  std::vector<std::uint64_t> cycle(size);
  for (std::uint64_t v = 0; v < size; ++v) cycle[v] = (v + 1) % size;
  return FiniteAction(size, {{0, std::move(cycle)}});
}

FiniteAction cyclic_top_action(std::uint32_t n) {
  std::uint64_t size = static_cast<std::uint64_t>(n) + 1;
  std::vector<std::uint64_t> cycle(size);
  for (std::uint64_t v = 0; v < size; ++v) cycle[v] = (v + 1) % size;
  return FiniteAction(size, {{n, std::move(cycle)}});
}

FiniteAction random_transitive_action(std::uint32_t n, std::uint64_t size, std::uint64_t seed) {
  if (size == 0) throw std::invalid_argument("random_transitive_action: size must be positive");
  std::mt19937_64 rng(seed);
  std::map<std::uint32_t, std::vector<std::uint64_t>> perms;
  // A full cycle through a shuffled ordering keeps the action transitive no
  // matter what the lower generators do.
  std::vector<std::uint64_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<std::uint64_t> cycle(size);
  for (std::uint64_t i = 0; i < size; ++i) cycle[order[i]] = order[(i + 1) % size];
  perms.emplace(n, std::move(cycle));
  for (std::uint32_t k = 0; k < n; ++k) {
    std::vector<std::uint64_t> p(size);
    std::iota(p.begin(), p.end(), 0);
    std::shuffle(p.begin(), p.end(), rng);
    perms.emplace(k, std::move(p));
  }
  return FiniteAction(size, perms);
}

std::map<std::uint32_t, FiniteAction> build_alpha_family(const AlphaFamilySpec& spec,
                                                         std::uint32_t max_n) {
  std::map<std::uint32_t, FiniteAction> out;
  for (std::uint32_t n = 1; n <= max_n; ++n) {
    std::uint64_t size = static_cast<std::uint64_t>(n) + 1;
    if (auto it = spec.sizes.find(n); it != spec.sizes.end()) size = it->second;
    switch (spec.kind) {
      case AlphaFamilySpec::Kind::cyclic:
        out.emplace(n, cyclic_action(n));
        break;
      case AlphaFamilySpec::Kind::cyclic_top:
        out.emplace(n, cyclic_top_action(n));
        break;
      case AlphaFamilySpec::Kind::random:
        out.emplace(n, random_transitive_action(n, size, spec.seed + n));
        break;
    }
  }
  return out;
}

std::map<std::uint32_t, std::uint64_t> family_weights(
    const std::map<std::uint32_t, FiniteAction>& alphas) {
  std::map<std::uint32_t, std::uint64_t> g;
  for (const auto& [n, a] : alphas) g[n] = a.size() + 1;
  return g;
}

}  // namespace irs
