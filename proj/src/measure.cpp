#include "irs/measure.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <stdexcept>
#include <thread>

#include "irs/appearance.hpp"

namespace irs {

bool ClopenSet::contradictory() const {
  for (const auto& w : in_words)
    if (std::find(out_words.begin(), out_words.end(), w) != out_words.end()) return true;
  return false;
}

std::optional<std::uint32_t> ClopenSet::max_generator() const {
  std::optional<std::uint32_t> m;
  auto fold = [&](const Word& w) {
    if (auto g = w.max_generator(); g && (!m || *g > *m)) m = *g;
  };
  for (const auto& w : in_words) fold(w);
  for (const auto& w : out_words) fold(w);
  return m;
}

ClopenSet conjugate_clopen(const ClopenSet& c, const Word& g) {
  ClopenSet out;
  out.id = c.id.empty() ? std::string{} : c.id + "^" + g.str();
  out.in_words.reserve(c.in_words.size());
  out.out_words.reserve(c.out_words.size());
  for (const auto& w : c.in_words) out.in_words.push_back(w.conjugated_by(g));
  for (const auto& w : c.out_words) out.out_words.push_back(w.conjugated_by(g));
  return out;
}

EmpiricalIRS::EmpiricalIRS(const GluedTruncation& b, std::uint64_t stage) : b_(&b), stage_(stage) {
  size_ = b.invariant_prefix(stage).size;
}

bool EmpiricalIRS::word_fixes(const Word& w, std::uint64_t id) const {
  if (id >= size_) throw std::out_of_range("EmpiricalIRS: point outside the support");
  StepResult r = b_->apply(w, id);
  if (r.status != StepStatus::ok)
    throw std::invalid_argument("EmpiricalIRS: word \"" + w.str() +
                                "\" uses a generator whose action is not certified on the "
                                "stage-" +
                                std::to_string(stage_) + " support");
  return r.id == id;
}

Rational EmpiricalIRS::theta(const ClopenSet& c) const {
  std::uint64_t hits = 0;
  for (std::uint64_t id = 0; id < size_; ++id) {
    bool member = true;
    for (const auto& w : c.in_words)
      if (!word_fixes(w, id)) {
        member = false;
        break;
      }
    if (member)
      for (const auto& w : c.out_words)
        if (word_fixes(w, id)) {
          member = false;
          break;
        }
    if (member) ++hits;
  }
  return Rational(static_cast<long long>(hits), static_cast<long long>(size_));
}

InvarianceCheck EmpiricalIRS::check_invariance(const ClopenSet& c, const Word& g) const {
  auto too_big = [&](std::optional<std::uint32_t> m) { return m && *m > stage_; };
  if (too_big(c.max_generator()) || too_big(g.max_generator()))
    throw std::invalid_argument(
        "check_invariance: generator indices exceed the stage; the prefix is only invariant "
        "under g_0..g_" +
        std::to_string(stage_));
  InvarianceCheck out;
  out.conjugated = theta(conjugate_clopen(c, g));
  out.original = theta(c);
  out.equal = out.conjugated == out.original;
  return out;
}

bool EmpiricalIRS::appears_within_orbit(std::uint64_t id, std::uint32_t n,
                                        const StagedProduct& q) const {
  if (id >= size_) throw std::out_of_range("EmpiricalIRS: point outside the support");
  OrbitResult region = b_->orbit(id, q);
  if (region.exited || region.unresolved)
    throw std::invalid_argument(
        "appears_within_orbit: the staged orbit leaves the truncation; enlarge the block "
        "count");
  GluedView view(*b_);
  return appears_in(b_->alpha(n), n, view, region.ids).has_value();
}

Rational EmpiricalIRS::appearance_statistic(std::uint32_t n, const StagedProduct& q,
                                            unsigned jobs) const {
  std::vector<char> member(size_, 0);
  if (jobs <= 1) {
    for (std::uint64_t id = 0; id < size_; ++id)
      member[id] = appears_within_orbit(id, n, q) ? 1 : 0;
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(jobs);
    for (unsigned w = 0; w < jobs; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::uint64_t id = next.fetch_add(1); id < size_; id = next.fetch_add(1))
            member[id] = appears_within_orbit(id, n, q) ? 1 : 0;
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& th : workers) th.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  std::uint64_t hits = 0;
  for (auto m : member) hits += m;
  return Rational(static_cast<long long>(hits), static_cast<long long>(size_));
}

}  // namespace irs
