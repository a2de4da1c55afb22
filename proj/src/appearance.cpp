#include "irs/appearance.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace irs {

namespace {

struct BfsEdge {
  std::uint64_t parent = 0;
  std::uint32_t gen = 0;
  bool inverse = false;
};

// Shortest path from any start to the target over the listed generators,
// capped at depth_cap steps; returns the word carrying start to target.
std::optional<std::pair<Word, std::uint64_t>> bfs_word(
    const GluedTruncation& b, const std::vector<std::uint64_t>& starts,
    const std::vector<std::uint32_t>& gens, std::uint64_t depth_cap,
    const std::set<std::uint64_t>& targets, std::uint64_t* frontier_out) {
  std::map<std::uint64_t, BfsEdge> parent;
  std::map<std::uint64_t, std::uint64_t> start_of;
  std::deque<std::pair<std::uint64_t, std::uint64_t>> queue;
  for (auto s : starts) {
    if (parent.count(s)) continue;
    parent[s] = BfsEdge{s, 0, false};
    start_of[s] = s;
    queue.emplace_back(s, 0);
  }

  auto reconstruct = [&](std::uint64_t id) -> std::pair<Word, std::uint64_t> {
    // Letters are collected from the target back to the start; the word
    // applies letters right to left, so this is already the right order.
    std::vector<Letter> letters;
    std::uint64_t cur = id;
    while (parent[cur].parent != cur) {
      const BfsEdge& e = parent[cur];
      letters.push_back({e.gen, e.inverse ? -1 : +1});
      cur = e.parent;
    }
    return {Word::from_letters(letters), start_of[id]};
  };

  for (auto s : starts)
    if (targets.count(s)) return reconstruct(s);

  std::uint64_t visited = parent.size();
  while (!queue.empty()) {
    auto [id, depth] = queue.front();
    queue.pop_front();
    if (depth == depth_cap) continue;
    for (auto gen : gens) {
      for (bool inverse : {false, true}) {
        StepResult r = b.step(id, gen, inverse);
        if (r.status != StepStatus::ok) continue;
        if (parent.count(r.id)) continue;
        parent[r.id] = BfsEdge{id, gen, inverse};
        start_of[r.id] = start_of[id];
        ++visited;
        if (targets.count(r.id)) {
          if (frontier_out) *frontier_out = visited;
          return reconstruct(r.id);
        }
        queue.emplace_back(r.id, depth + 1);
      }
    }
  }
  if (frontier_out) *frontier_out = visited;
  return std::nullopt;
}

}  // namespace

NavigationWitness navigate(const GluedTruncation& b, const GluedPoint& v, std::uint32_t n,
                           std::uint32_t t) {
  if (n < 1 || t < n) throw std::invalid_argument("navigate: need t >= n >= 1");
  const Schedule& s = b.schedule();
  const std::uint64_t j = v.block;
  if (j >= b.blocks()) throw std::out_of_range("navigate: point outside the truncation");
  if (s.f(j) > t)
    throw std::invalid_argument("navigate: start block has f(j) = " + std::to_string(s.f(j)) +
                                " > t");

  NavigationWitness w;
  w.start = v;
  w.j = j;
  w.n = n;
  w.t = t;
  w.K = s.K(n);

  const auto l = s.least_in_interval(j, n);
  if (!l)
    throw NavigationError("interval", 0,
                          "navigate: no block with f = " + std::to_string(n) +
                              " in the K-interval of " + std::to_string(j));
  if (*l >= b.blocks())
    throw NavigationError("interval", 0,
                          "navigate: target block " + std::to_string(*l) +
                              " lies outside the truncation");
  w.l = *l;

  std::uint64_t max_v = 0;
  for (std::uint32_t i = 1; i <= t; ++i) max_v = std::max(max_v, b.alpha(i).size());

  // stage 1: to the marked point of block j, within the ball over g_0..g_t
  const std::uint64_t marked = b.block_id(j, 0);
  const std::uint64_t uj = b.link_id(j);
  if (v.tag == GluedPoint::Tag::link) {
    w.to_marked = Word{};
    w.to_link = Word{};
  } else {
    std::vector<std::uint32_t> low(t + 1);
    for (std::uint32_t i = 0; i <= t; ++i) low[i] = i;
    std::uint64_t frontier = 0;
    auto path = bfs_word(b, {b.id_of(v)}, low, max_v, {marked}, &frontier);
    if (!path)
      throw NavigationError("S1", frontier, "navigate: marked point of block " +
                                                std::to_string(j) + " unreachable within " +
                                                std::to_string(max_v) + " letters");
    w.to_marked = path->first;
    // stage 2: up the link; f(j) <= t keeps the generator inside S_2
    w.to_link = Word::generator(static_cast<std::uint32_t>(b.link_generator(j)));
  }

  // stage 3: across the linking points, words over g_K, g_2K, g_3K of
  // length at most 3K
  if (w.K > UINT32_MAX / 3) throw std::invalid_argument("navigate: K too large");
  const auto K32 = static_cast<std::uint32_t>(w.K);
  std::vector<std::uint32_t> ks{K32, 2 * K32, 3 * K32};
  const std::uint64_t ul = b.link_id(w.l);
  {
    std::uint64_t frontier = 0;
    auto path = bfs_word(b, {uj}, ks, 3 * w.K, {ul}, &frontier);
    if (!path)
      throw NavigationError("S3", frontier,
                            "navigate: u_" + std::to_string(w.l) + " unreachable from u_" +
                                std::to_string(j) + " within " + std::to_string(3 * w.K) +
                                " letters over gK, g2K, g3K");
    w.across = path->first;
  }

  // stage 4: down the link of block l; f(l) = n makes this g_{n+1}
  w.into_block = Word::generator(n + 1);
  StepResult entry = b.apply(w.into_block, ul);
  if (entry.status != StepStatus::ok || b.point_of(entry.id).block != w.l)
    throw NavigationError("S4", 0, "navigate: g" + std::to_string(n + 1) +
                                       " does not enter block " + std::to_string(w.l));
  w.entry = b.point_of(entry.id);

  // stage 5: cover the whole block by words over g_1..g_n of length at
  // most |V_n|
  const std::uint64_t bs = b.block_size(w.l);
  const std::uint64_t vn = b.alpha(n).size();
  std::vector<std::uint32_t> mid;
  for (std::uint32_t i = 1; i <= n; ++i) mid.push_back(i);
  w.cover.resize(bs);
  std::set<std::uint64_t> remaining;
  for (std::uint64_t i = 0; i < bs; ++i) remaining.insert(b.block_id(w.l, i));
  // one BFS, then read off the path to every block point
  std::map<std::uint64_t, BfsEdge> parent;
  std::deque<std::pair<std::uint64_t, std::uint64_t>> queue;
  parent[entry.id] = BfsEdge{entry.id, 0, false};
  queue.emplace_back(entry.id, 0);
  while (!queue.empty()) {
    auto [id, depth] = queue.front();
    queue.pop_front();
    if (depth == vn) continue;
    for (auto gen : mid) {
      for (bool inverse : {false, true}) {
        StepResult r = b.step(id, gen, inverse);
        if (r.status != StepStatus::ok || parent.count(r.id)) continue;
        parent[r.id] = BfsEdge{id, gen, inverse};
        queue.emplace_back(r.id, depth + 1);
      }
    }
  }
  for (std::uint64_t i = 0; i < bs; ++i) {
    const std::uint64_t target = b.block_id(w.l, i);
    if (!parent.count(target))
      throw NavigationError("S5", parent.size(),
                            "navigate: point " + b.point_of(target).str() +
                                " of block " + std::to_string(w.l) +
                                " not covered within " + std::to_string(vn) + " letters");
    std::vector<Letter> letters;
    std::uint64_t cur = target;
    while (parent[cur].parent != cur) {
      const BfsEdge& e = parent[cur];
      letters.push_back({e.gen, e.inverse ? -1 : +1});
      cur = e.parent;
    }
    w.cover[i] = Word::from_letters(letters);
  }
  return w;
}

bool replay_navigation(const GluedTruncation& b, const NavigationWitness& w) {
  const Schedule& s = b.schedule();
  std::uint64_t max_v = 0;
  for (std::uint32_t i = 1; i <= w.t; ++i) max_v = std::max(max_v, b.alpha(i).size());

  // stage caps and generator alphabets
  auto within = [](const Word& word, std::uint64_t cap, std::uint32_t lo, std::uint32_t hi) {
    if (word.length() > cap) return false;
    for (const auto& l : word.letters())
      if (l.gen < lo || l.gen > hi) return false;
    return true;
  };
  if (!within(w.to_marked, max_v, 0, w.t)) return false;
  if (!(w.to_link.is_identity() ||
        w.to_link == Word::generator(static_cast<std::uint32_t>(s.f(w.j)) + 1)))
    return false;
  if (s.f(w.j) + 1 > w.t + 1 && !w.to_link.is_identity()) return false;
  if (w.across.length() > 3 * w.K) return false;
  for (const auto& l : w.across.letters())
    if (l.gen != w.K && l.gen != 2 * w.K && l.gen != 3 * w.K) return false;
  if (w.into_block != Word::generator(w.n + 1)) return false;

  std::uint64_t cur = b.id_of(w.start);
  StepResult r = b.apply(w.to_marked, cur);
  if (r.status != StepStatus::ok) return false;
  if (w.start.tag == GluedPoint::Tag::block && r.id != b.block_id(w.j, 0)) return false;
  r = b.apply(w.to_link, r.id);
  if (r.status != StepStatus::ok || r.id != b.link_id(w.j)) return false;
  r = b.apply(w.across, r.id);
  if (r.status != StepStatus::ok || r.id != b.link_id(w.l)) return false;
  r = b.apply(w.into_block, r.id);
  if (r.status != StepStatus::ok || r.id != b.id_of(w.entry)) return false;

  const std::uint64_t vn = b.alpha(w.n).size();
  if (w.cover.size() != b.block_size(w.l)) return false;
  for (std::uint64_t i = 0; i < w.cover.size(); ++i) {
    if (!within(w.cover[i], vn, 1, w.n)) return false;
    StepResult c = b.apply(w.cover[i], b.id_of(w.entry));
    if (c.status != StepStatus::ok || c.id != b.block_id(w.l, i)) return false;
  }
  return true;
}

Rational shift_cylinder_measure(const FiniteAction& alpha, const Word& g,
                                const CylinderSpec& rho, const CylinderSpec& sigma) {
  // The shifted cylinder constrains x at alpha(g) . v to rho(v); intersect
  // with sigma and count the constrained coordinates.
  std::map<std::uint64_t, bool> constraints;
  for (const auto& [v, bit] : rho.values) {
    const std::uint64_t moved = alpha.apply_extended(g, v);
    auto it = constraints.find(moved);
    if (it != constraints.end() && it->second != bit) return Rational(0);
    constraints[moved] = bit;
  }
  for (const auto& [v, bit] : sigma.values) {
    auto it = constraints.find(v);
    if (it != constraints.end() && it->second != bit) return Rational(0);
    constraints[v] = bit;
  }
  if (constraints.size() > 62)
    throw std::invalid_argument("shift_cylinder_measure: cylinder domain too large");
  return Rational(1, static_cast<long long>(1) << constraints.size());
}

bool check_truncation_agreement(const FiniteAction& alpha, const FiniteAction& alpha_hat,
                                std::uint32_t n, std::span<const std::uint64_t> T) {
  for (std::uint32_t k = 0; k < n; ++k) {
    const Word gk = Word::generator(k);
    for (auto v : T)
      if (alpha.apply_extended(gk, v) != alpha_hat.apply_extended(gk, v)) return false;
  }
  return true;
}

bool cylinder_neighborhood_contains(const FiniteAction& alpha, const FiniteAction& other,
                                    std::uint32_t n, const Rational& eps,
                                    std::span<const std::uint64_t> T) {
  if (T.size() > 20)
    throw std::invalid_argument("cylinder_neighborhood_contains: |T| too large for brute force");
  std::vector<std::uint64_t> pts(T.begin(), T.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  const std::uint64_t count = std::uint64_t{1} << pts.size();

  auto spec_of = [&](std::uint64_t mask) {
    CylinderSpec s;
    for (std::size_t i = 0; i < pts.size(); ++i) s.values[pts[i]] = (mask >> i) & 1;
    return s;
  };

  for (std::uint32_t k = 0; k < n; ++k) {
    const Word gk = Word::generator(k);
    for (std::uint64_t rm = 0; rm < count; ++rm) {
      const CylinderSpec rho = spec_of(rm);
      for (std::uint64_t sm = 0; sm < count; ++sm) {
        const CylinderSpec sigma = spec_of(sm);
        const Rational lhs = shift_cylinder_measure(alpha, gk, rho, sigma);
        const Rational rhs = shift_cylinder_measure(other, gk, rho, sigma);
        const Rational diff = lhs > rhs ? lhs - rhs : rhs - lhs;
        if (diff >= eps) return false;
      }
    }
  }
  return true;
}

}  // namespace irs
