#ifndef IRS_SCHEDULE_HPP
#define IRS_SCHEDULE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "irs/rational.hpp"

namespace irs {

struct DensityReport {
  Rational epsilon;
  std::uint32_t t = 0;
  Rational worst_ratio;    // max over checked m of the tail mass ratio
  std::uint64_t worst_m = 0;
  bool tail_bound_ok = false;   // tail ratio < epsilon at every checked m
  bool per_n_bound_ok = false;  // |A_n cap m| g(n) / total < 2^-n for all n > t
};

// Least t >= 2 with sum_{n>t} 2^-n = 2^-t < epsilon.
std::uint32_t density_tail_index(const Rational& epsilon);

// The scheduling function f: {0..horizon-1} -> {1..max_n} together with the
// partition data that certifies its interval-hitting property.
//
// Construction: A'_1 is the even numbers; K_1 = 2 and K_n = 2 a_2 ... a_n,
// where each a_n is the least multiple of 3 exceeding
// max(a_{n-1}, 3 g(n) 2^n / g(n-1)) that keeps the partial sums of
// 1/(a_2...a_n) below 1/3.  A_n (n >= 2) takes the least index eligible in
// each interval [i K_n, (i+1) K_n), where eligible means not in
// A'_1 u A_2 u ... u A_{n-1}, and additionally >= K_n / 3 when i = 0.
// A_1 absorbs the rest, so f is total.
class Schedule {
 public:
  static Schedule build(const std::map<std::uint32_t, std::uint64_t>& g_weights,
                        std::uint32_t max_n, std::uint64_t horizon);

  // Ingest pre-computed values (JSON round trips, hand-made test schedules).
  // Validates only that the values are a total function into N+; the
  // arithmetic invariants above are certified for built schedules only.
  static Schedule from_values(std::vector<std::uint32_t> f,
                              std::map<std::uint32_t, std::uint64_t> K,
                              std::map<std::uint32_t, std::uint64_t> g_weights,
                              std::map<std::uint32_t, std::uint64_t> a = {});

  std::uint64_t horizon() const { return static_cast<std::uint64_t>(f_.size()); }
  std::uint32_t max_n() const { return max_n_; }
  std::uint32_t f(std::uint64_t j) const;
  const std::vector<std::uint32_t>& values() const { return f_; }
  std::uint64_t K(std::uint32_t n) const;
  std::uint64_t g(std::uint32_t n) const;
  const std::map<std::uint32_t, std::uint64_t>& K_map() const { return K_; }
  const std::map<std::uint32_t, std::uint64_t>& g_map() const { return g_; }
  const std::map<std::uint32_t, std::uint64_t>& a_map() const { return a_; }

  // A_n as an explicit sorted list (n >= 2); A_1 is implicit.
  const std::vector<std::uint64_t>& members(std::uint32_t n) const;
  // |A_n cap {0..m-1}|
  std::uint64_t count_below(std::uint32_t n, std::uint64_t m) const;

  // C_m(f) = sum_{j<m} (|V_{f(j)}| + 1)
  std::uint64_t C(std::uint64_t m) const;

  // Least l in the K_n-interval of j with f(l) = n, if any.
  std::optional<std::uint64_t> least_in_interval(std::uint64_t j, std::uint32_t n) const;

  // True iff A_n meets every interval [i K_n, (i+1) K_n) for i <= i_max.
  bool check_hitting(std::uint32_t n, std::uint64_t i_max) const;

  // Picks the least t >= 2 with 2^-t < epsilon, then checks the tail ratio
  // bound for every m in 1..m_max and the per-n bound for every n > t.
  // Failed bounds are reported, not thrown.
  DensityReport check_density(const Rational& epsilon, std::uint64_t m_max) const;

 private:
  std::vector<std::uint32_t> f_;
  std::uint32_t max_n_ = 1;
  std::map<std::uint32_t, std::uint64_t> a_, K_, g_;
  std::map<std::uint32_t, std::vector<std::uint64_t>> members_;  // n >= 2
  std::vector<std::uint64_t> cumulative_;  // cumulative_[m] = C_m(f)
  void finish();
};

}  // namespace irs

#endif
