#include "irs/glue.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <deque>
#include <set>
#include <stdexcept>

namespace irs {

std::string GluedPoint::str() const {
  if (tag == Tag::link) return "u:" + std::to_string(block);
  return "w:" + std::to_string(block) + ":" + std::to_string(index);
}

GluedPoint GluedPoint::parse(std::string_view text) {
  auto fail = [&] {
    throw std::invalid_argument("GluedPoint::parse: bad point \"" + std::string(text) + "\"");
  };
  GluedPoint p;
  if (text.starts_with("u:")) {
    p.tag = Tag::link;
    auto [ptr, ec] = std::from_chars(text.data() + 2, text.data() + text.size(), p.block);
    if (ec != std::errc{} || ptr != text.data() + text.size()) fail();
    return p;
  }
  if (!text.starts_with("w:")) fail();
  p.tag = Tag::block;
  auto [ptr, ec] = std::from_chars(text.data() + 2, text.data() + text.size(), p.block);
  if (ec != std::errc{} || ptr == text.data() + text.size() || *ptr != ':') fail();
  auto [ptr2, ec2] = std::from_chars(ptr + 1, text.data() + text.size(), p.index);
  if (ec2 != std::errc{} || ptr2 != text.data() + text.size()) fail();
  return p;
}

GluedTruncation::GluedTruncation(std::map<std::uint32_t, FiniteAction> alphas, Schedule schedule,
                                 std::uint64_t blocks)
    : alphas_(std::move(alphas)), schedule_(std::move(schedule)), blocks_(blocks) {
  if (blocks_ == 0) throw std::invalid_argument("GluedTruncation: need at least one block");
  // l_{M-1} depends on f(M), hence the +1.
  if (schedule_.horizon() < blocks_ + 1)
    throw std::invalid_argument("GluedTruncation: schedule horizon must exceed the block count");

  offsets_.assign(blocks_ + 1, 0);
  for (std::uint64_t j = 0; j < blocks_; ++j) {
    const std::uint32_t n = schedule_.f(j);
    auto it = alphas_.find(n);
    if (it == alphas_.end())
      throw std::invalid_argument("GluedTruncation: no block action for n=" + std::to_string(n));
    const FiniteAction& a = it->second;
    if (a.size() == 0 || !is_transitive(a))
      throw std::invalid_argument("GluedTruncation: block action for n=" + std::to_string(n) +
                                  " is not transitive");
    if (auto ms = a.max_support(); ms && *ms > n)
      throw std::invalid_argument("GluedTruncation: block action for n=" + std::to_string(n) +
                                  " moves g_k with k > n");
    if (schedule_.g(n) != a.size() + 1)
      throw std::invalid_argument("GluedTruncation: schedule weight g(" + std::to_string(n) +
                                  ") disagrees with the block size");
    offsets_[j + 1] = offsets_[j] + a.size() + 1;
  }

  l_.assign(blocks_, 0);
  std::uint64_t running_max_f = 0;
  for (std::uint64_t j = 0; j < blocks_; ++j) {
    running_max_f = std::max<std::uint64_t>(running_max_f, schedule_.f(j));
    running_max_f = std::max<std::uint64_t>(running_max_f, schedule_.f(j + 1));
    const std::uint64_t lower = std::max<std::uint64_t>(j, running_max_f) + 2;
    l_[j] = (j == 0) ? lower : std::max(l_[j - 1] + 1, lower);
  }

  check_no_double_assignment();
}

const FiniteAction& GluedTruncation::alpha(std::uint32_t n) const {
  auto it = alphas_.find(n);
  if (it == alphas_.end())
    throw std::out_of_range("GluedTruncation::alpha: no action for n=" + std::to_string(n));
  return it->second;
}

std::uint64_t GluedTruncation::block_size(std::uint64_t j) const {
  if (j >= blocks_) throw std::out_of_range("GluedTruncation::block_size: bad block");
  return offsets_[j + 1] - offsets_[j] - 1;
}

std::uint64_t GluedTruncation::link_generator(std::uint64_t j) const {
  return static_cast<std::uint64_t>(schedule_.f(j)) + 1;
}

std::uint64_t GluedTruncation::chain_generator(std::uint64_t j) const {
  if (j >= blocks_) throw std::out_of_range("GluedTruncation::chain_generator: bad block");
  return l_[j];
}

std::uint64_t GluedTruncation::id_of(const GluedPoint& p) const {
  if (p.block >= blocks_) throw std::out_of_range("GluedTruncation::id_of: bad block");
  if (p.tag == GluedPoint::Tag::link) return link_id(p.block);
  if (p.index >= block_size(p.block))
    throw std::out_of_range("GluedTruncation::id_of: index beyond block size");
  return offsets_[p.block] + p.index;
}

GluedPoint GluedTruncation::point_of(std::uint64_t id) const {
  if (id >= points()) throw std::out_of_range("GluedTruncation::point_of: bad id");
  const auto it = std::upper_bound(offsets_.begin(), offsets_.end(), id);
  const std::uint64_t j = static_cast<std::uint64_t>(it - offsets_.begin()) - 1;
  const std::uint64_t rel = id - offsets_[j];
  if (rel == block_size(j)) return GluedPoint{GluedPoint::Tag::link, j, 0};
  return GluedPoint{GluedPoint::Tag::block, j, rel};
}

std::uint64_t GluedTruncation::link_id(std::uint64_t j) const {
  if (j >= blocks_) throw std::out_of_range("GluedTruncation::link_id: bad block");
  return offsets_[j + 1] - 1;
}

std::uint64_t GluedTruncation::block_id(std::uint64_t j, std::uint64_t i) const {
  return id_of(GluedPoint{GluedPoint::Tag::block, j, i});
}

StepResult GluedTruncation::top_cycle_step(std::uint32_t gen, std::uint64_t j,
                                           bool inverse) const {
  const std::uint64_t n = gen;
  const std::uint64_t lo = (j / n) * n;
  const std::uint64_t hi = lo + n;
  if (hi > schedule_.horizon()) return {StepStatus::unresolved, 0};
  // eligible members of the interval, in increasing order
  std::vector<std::uint64_t> eligible;
  eligible.reserve(n);
  for (std::uint64_t d = lo; d < hi; ++d)
    if (static_cast<std::uint64_t>(schedule_.f(d)) + 1 != n) eligible.push_back(d);
  if (eligible.size() <= 1) return {StepStatus::ok, link_id(j)};
  const auto pos = std::lower_bound(eligible.begin(), eligible.end(), j) - eligible.begin();
  const std::size_t count = eligible.size();
  const std::size_t next =
      inverse ? (static_cast<std::size_t>(pos) + count - 1) % count
              : (static_cast<std::size_t>(pos) + 1) % count;
  const std::uint64_t target = eligible[next];
  if (target >= blocks_) return {StepStatus::exits_truncation, 0};
  return {StepStatus::ok, link_id(target)};
}

StepResult GluedTruncation::step(std::uint64_t id, std::uint32_t gen, bool inverse) const {
  const GluedPoint p = point_of(id);
  const std::uint64_t j = p.block;
  const std::uint64_t fj = schedule_.f(j);

  if (p.tag == GluedPoint::Tag::link) {
    if (gen == fj + 1) return {StepStatus::ok, block_id(j, 0)};  // down the link
    if (gen == 0) return {StepStatus::ok, id};
    return top_cycle_step(gen, j, inverse);
  }

  if (gen <= fj) {
    const FiniteAction& a = alpha(static_cast<std::uint32_t>(fj));
    return {StepStatus::ok, block_id(j, a.apply_gen(gen, p.index, inverse))};
  }
  if (p.index == 0) {
    if (gen == fj + 1) return {StepStatus::ok, link_id(j)};  // up the link
    if (gen == l_[j]) {
      if (j + 1 >= blocks_) return {StepStatus::exits_truncation, 0};
      return {StepStatus::ok, block_id(j + 1, 0)};
    }
    if (j >= 1 && gen == l_[j - 1]) return {StepStatus::ok, block_id(j - 1, 0)};
  }
  return {StepStatus::ok, id};
}

StepResult GluedTruncation::apply(const Word& w, std::uint64_t id) const {
  const auto& letters = w.letters();
  for (auto it = letters.rbegin(); it != letters.rend(); ++it) {
    const bool inverse = it->exp < 0;
    for (std::int64_t k = 0; k < std::llabs(it->exp); ++k) {
      StepResult r = step(id, it->gen, inverse);
      if (r.status != StepStatus::ok) return r;
      id = r.id;
    }
  }
  return {StepStatus::ok, id};
}

ApplyResult GluedTruncation::apply(const Word& w, const GluedPoint& p) const {
  StepResult r = apply(w, id_of(p));
  if (r.status != StepStatus::ok) return {r.status, GluedPoint{}};
  return {StepStatus::ok, point_of(r.id)};
}

InvariantPrefix GluedTruncation::invariant_prefix(std::uint64_t m) const {
  std::uint64_t fact = 1;
  for (std::uint64_t i = 2; i <= m; ++i) {
    fact *= i;
    if (fact > blocks_) break;
  }
  if (fact > blocks_)
    throw std::invalid_argument("invariant_prefix: m! exceeds the block count");
  const std::uint64_t size = offsets_[fact];
  for (std::uint64_t id = 0; id < size; ++id) {
    for (std::uint32_t gen = 0; gen <= m; ++gen) {
      for (bool inverse : {false, true}) {
        StepResult r = step(id, gen, inverse);
        if (r.status != StepStatus::ok || r.id >= size)
          throw std::logic_error("invariant_prefix: T_" + std::to_string(fact) +
                                 " is not closed under g" + std::to_string(gen) +
                                 " at point " + point_of(id).str());
      }
    }
  }
  return InvariantPrefix{m, size};
}

namespace {

void bfs_expand(const GluedTruncation& b, const std::vector<std::uint32_t>& gens,
                std::uint64_t depth_cap, std::set<std::uint64_t>& current, OrbitResult& flags) {
  std::deque<std::pair<std::uint64_t, std::uint64_t>> queue;  // (id, depth)
  std::set<std::uint64_t> seen = current;
  for (auto id : current) queue.emplace_back(id, 0);
  while (!queue.empty()) {
    auto [id, depth] = queue.front();
    queue.pop_front();
    if (depth == depth_cap) continue;
    for (auto gen : gens) {
      for (bool inverse : {false, true}) {
        StepResult r = b.step(id, gen, inverse);
        if (r.status == StepStatus::exits_truncation) {
          flags.exited = true;
          continue;
        }
        if (r.status == StepStatus::unresolved) {
          flags.unresolved = true;
          continue;
        }
        if (seen.insert(r.id).second) queue.emplace_back(r.id, depth + 1);
      }
    }
  }
  current = std::move(seen);
}

}  // namespace

OrbitResult GluedTruncation::orbit(std::uint64_t id, const WordSet& words) const {
  OrbitResult out;
  std::set<std::uint64_t> acc;
  for (const auto& w : words.words) {
    StepResult r = apply(w, id);
    if (r.status == StepStatus::exits_truncation)
      out.exited = true;
    else if (r.status == StepStatus::unresolved)
      out.unresolved = true;
    else
      acc.insert(r.id);
  }
  out.ids.assign(acc.begin(), acc.end());
  return out;
}

OrbitResult GluedTruncation::orbit(std::uint64_t id, const StagedProduct& stages) const {
  OrbitResult out;
  std::set<std::uint64_t> current{id};
  for (const auto& stage : stages.stages) {
    if (std::holds_alternative<BallStage>(stage)) {
      const auto& ball = std::get<BallStage>(stage);
      bfs_expand(*this, ball.generators, ball.max_length, current, out);
    } else {
      const auto& set = std::get<WordSet>(stage);
      std::set<std::uint64_t> next;
      for (auto p : current) {
        for (const auto& w : set.words) {
          StepResult r = apply(w, p);
          if (r.status == StepStatus::exits_truncation)
            out.exited = true;
          else if (r.status == StepStatus::unresolved)
            out.unresolved = true;
          else
            next.insert(r.id);
        }
      }
      current = std::move(next);
    }
  }
  out.ids.assign(current.begin(), current.end());
  return out;
}

std::map<std::uint32_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>>
GluedTruncation::realized_edges(std::uint32_t max_gen) const {
  std::map<std::uint32_t, std::vector<std::pair<std::uint64_t, std::uint64_t>>> edges;
  for (std::uint32_t gen = 0; gen <= max_gen; ++gen) {
    std::vector<std::pair<std::uint64_t, std::uint64_t>> list;
    for (std::uint64_t id = 0; id < points(); ++id) {
      StepResult r = step(id, gen, false);
      if (r.status == StepStatus::ok && r.id != id) list.emplace_back(id, r.id);
    }
    if (!list.empty()) edges.emplace(gen, std::move(list));
  }
  return edges;
}

// The families below partition the rule domain: block edges live on block
// points with gen <= f(j), links and chains touch marked points and u_j
// with gens above f(j), and top cycles touch only u-points.  Generators
// above l_{M-1} carry top cycle rules alone, so sweeping to that cap is a
// complete conflict check.
void GluedTruncation::check_no_double_assignment() const {
  const std::uint64_t cap = l_[blocks_ - 1];
  std::vector<std::pair<std::uint64_t, std::uint64_t>> claims;  // (gen*points + id, target)

  auto claim = [&](std::uint64_t gen, std::uint64_t id, std::uint64_t target) {
    claims.emplace_back(gen * points() + id, target);
  };
  constexpr std::uint64_t kOutside = ~std::uint64_t{0};

  for (std::uint64_t j = 0; j < blocks_; ++j) {
    const std::uint32_t fj = schedule_.f(j);
    const FiniteAction& a = alpha(fj);
    // block actions
    for (const auto& [gen, perm] : a.perms())
      for (std::uint64_t x = 0; x < a.size(); ++x)
        if (perm.fwd[x] != x) claim(gen, block_id(j, x), block_id(j, perm.fwd[x]));
    // links
    claim(fj + 1, block_id(j, 0), link_id(j));
    claim(fj + 1, link_id(j), block_id(j, 0));
    // chains
    claim(l_[j], block_id(j, 0), j + 1 < blocks_ ? block_id(j + 1, 0) : kOutside);
    if (j + 1 < blocks_) claim(l_[j], block_id(j + 1, 0), block_id(j, 0));
  }
  // top cycles up to the cap
  for (std::uint64_t n = 1; n <= cap; ++n) {
    for (std::uint64_t lo = 0; lo < blocks_; lo += n) {
      if (lo + n > schedule_.horizon()) break;
      std::vector<std::uint64_t> eligible;
      for (std::uint64_t d = lo; d < lo + n; ++d)
        if (static_cast<std::uint64_t>(schedule_.f(d)) + 1 != n) eligible.push_back(d);
      if (eligible.size() <= 1) continue;
      for (std::size_t i = 0; i < eligible.size(); ++i) {
        if (eligible[i] >= blocks_) continue;
        const std::uint64_t target = eligible[(i + 1) % eligible.size()];
        claim(n, link_id(eligible[i]), target < blocks_ ? link_id(target) : kOutside);
      }
    }
  }

  std::sort(claims.begin(), claims.end());
  for (std::size_t i = 1; i < claims.size(); ++i) {
    if (claims[i].first == claims[i - 1].first) {
      const std::uint64_t gen = claims[i].first / points();
      const std::uint64_t id = claims[i].first % points();
      throw std::logic_error("GluedTruncation: double assignment of g" + std::to_string(gen) +
                             " at point " + point_of(id).str());
    }
  }
  // injectivity of each partial map: no two sources share a target
  std::vector<std::uint64_t> targets;
  targets.reserve(claims.size());
  for (const auto& [key, target] : claims)
    if (target != kOutside) targets.push_back((key / points()) * points() + target);
  std::sort(targets.begin(), targets.end());
  for (std::size_t i = 1; i < targets.size(); ++i) {
    if (targets[i] == targets[i - 1]) {
      const std::uint64_t gen = targets[i] / points();
      const std::uint64_t id = targets[i] % points();
      throw std::logic_error("GluedTruncation: two edges of g" + std::to_string(gen) +
                             " share the target " + point_of(id).str());
    }
  }
}

GluedTruncation assemble(std::map<std::uint32_t, FiniteAction> alphas, Schedule schedule,
                         std::uint64_t blocks) {
  return GluedTruncation(std::move(alphas), std::move(schedule), blocks);
}

}  // namespace irs
