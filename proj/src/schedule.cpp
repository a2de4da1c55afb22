#include "irs/schedule.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace irs {

namespace {

constexpr std::uint64_t kHorizonLimit = 200'000'000;

// Least multiple of 3 strictly greater than both bounds.
std::uint64_t next_multiple_of_3_above(std::uint64_t lo_exclusive) {
  return ((lo_exclusive / 3) + 1) * 3;
}

}  // namespace

Schedule Schedule::build(const std::map<std::uint32_t, std::uint64_t>& g_weights,
                         std::uint32_t max_n, std::uint64_t horizon) {
  if (max_n < 1) throw std::invalid_argument("Schedule::build: max_n must be >= 1");
  for (std::uint32_t n = 1; n <= max_n; ++n)
    if (!g_weights.count(n) || g_weights.at(n) < 2)
      throw std::invalid_argument("Schedule::build: g(" + std::to_string(n) +
                                  ") missing or below 2");
  if (horizon > kHorizonLimit)
    throw std::invalid_argument("Schedule::build: horizon too large to materialize");

  Schedule s;
  s.max_n_ = max_n;
  s.g_ = g_weights;
  s.K_[1] = 2;

  // a_n: least multiple of 3 exceeding max(a_{n-1}, 3 g(n) 2^n / g(n-1))
  // subject to the partial sum bound sum 1/(a_2..a_n) < 1/3.  The sum is
  // tracked as a rational with denominator a_2 * ... * a_n.
  std::uint64_t prod = 1;      // a_2 * ... * a_{n-1}
  std::uint64_t sum_num = 0;   // running sum over the common denominator prod
  std::uint64_t prev_a = 0;
  for (std::uint32_t n = 2; n <= max_n; ++n) {
    const std::uint64_t gn = g_weights.at(n), gprev = g_weights.at(n - 1);
    // a > 3 g(n) 2^n / g(n-1) holds iff a > floor of that quotient
    const std::uint64_t lo = (3 * gn * (std::uint64_t{1} << n)) / gprev;
    std::uint64_t a = next_multiple_of_3_above(std::max(prev_a, lo));
    // partial sums: (sum_num * a + prod) / (prod * a) < 1/3
    while (3 * (sum_num * a + prod) >= prod * a) a += 3;
    sum_num = sum_num * a + prod;
    prod *= a;
    prev_a = a;
    s.a_[n] = a;
    s.K_[n] = 2 * prod;
  }

  if (horizon < s.K_.at(max_n))
    throw std::invalid_argument("Schedule::build: horizon " + std::to_string(horizon) +
                                " below K_" + std::to_string(max_n) + " = " +
                                std::to_string(s.K_.at(max_n)));

  // 0 marks "not yet assigned"; whatever remains ends up in A_1.
  s.f_.assign(horizon, 0);
  for (std::uint32_t n = 2; n <= max_n; ++n) {
    const std::uint64_t K = s.K_.at(n);
    std::vector<std::uint64_t> picks;
    for (std::uint64_t lo = 0; lo < horizon; lo += K) {
      const std::uint64_t hi = std::min(lo + K, horizon);
      // The counting bound guaranteeing an eligible index in a full
      // interval; a violation would mean the a_n arithmetic is wrong.
      std::uint64_t occupied = 0;
      for (std::uint64_t j = lo; j < hi; ++j)
        if (j % 2 == 0 || s.f_[j] != 0) ++occupied;
      if (hi == lo + K && 2 * K <= 3 * occupied)
        throw std::logic_error("Schedule::build: interval counting bound failed at n=" +
                               std::to_string(n) + ", interval start " + std::to_string(lo));
      std::optional<std::uint64_t> pick;
      for (std::uint64_t j = lo; j < hi; ++j) {
        if (lo == 0 && 3 * j < K) continue;  // first element chosen >= K/3
        if (j % 2 == 0) continue;            // evens stay in A_1
        if (s.f_[j] != 0) continue;          // already claimed by some A_m, m < n
        pick = j;
        break;
      }
      if (!pick) {
        if (hi == lo + K)
          throw std::logic_error("Schedule::build: no eligible index in full interval at n=" +
                                 std::to_string(n));
        continue;  // trailing partial interval may have no room
      }
      s.f_[*pick] = n;
      picks.push_back(*pick);
    }
    s.members_[n] = std::move(picks);
  }
  for (auto& v : s.f_)
    if (v == 0) v = 1;

  s.finish();
  return s;
}

Schedule Schedule::from_values(std::vector<std::uint32_t> f,
                               std::map<std::uint32_t, std::uint64_t> K,
                               std::map<std::uint32_t, std::uint64_t> g_weights,
                               std::map<std::uint32_t, std::uint64_t> a) {
  Schedule s;
  if (f.empty()) throw std::invalid_argument("Schedule::from_values: empty f");
  for (auto v : f)
    if (v == 0) throw std::invalid_argument("Schedule::from_values: f must map into N+");
  s.f_ = std::move(f);
  s.max_n_ = *std::max_element(s.f_.begin(), s.f_.end());
  s.K_ = std::move(K);
  s.g_ = std::move(g_weights);
  s.a_ = std::move(a);
  for (auto v : s.f_)
    if (!s.g_.count(v))
      throw std::invalid_argument("Schedule::from_values: g(" + std::to_string(v) +
                                  ") missing");
  for (std::uint64_t j = 0; j < s.f_.size(); ++j)
    if (s.f_[j] >= 2) s.members_[s.f_[j]].push_back(j);
  s.finish();
  return s;
}

void Schedule::finish() {
  cumulative_.assign(f_.size() + 1, 0);
  for (std::uint64_t j = 0; j < f_.size(); ++j)
    cumulative_[j + 1] = cumulative_[j] + g_.at(f_[j]);
}

std::uint32_t Schedule::f(std::uint64_t j) const {
  if (j >= f_.size()) throw std::out_of_range("Schedule::f: index beyond horizon");
  return f_[j];
}

std::uint64_t Schedule::K(std::uint32_t n) const {
  auto it = K_.find(n);
  if (it == K_.end()) throw std::out_of_range("Schedule::K: no K_" + std::to_string(n));
  return it->second;
}

std::uint64_t Schedule::g(std::uint32_t n) const {
  auto it = g_.find(n);
  if (it == g_.end()) throw std::out_of_range("Schedule::g: no g(" + std::to_string(n) + ")");
  return it->second;
}

const std::vector<std::uint64_t>& Schedule::members(std::uint32_t n) const {
  static const std::vector<std::uint64_t> empty;
  auto it = members_.find(n);
  return it == members_.end() ? empty : it->second;
}

std::uint64_t Schedule::count_below(std::uint32_t n, std::uint64_t m) const {
  m = std::min<std::uint64_t>(m, f_.size());
  if (n >= 2) {
    const auto& v = members(n);
    return static_cast<std::uint64_t>(
        std::lower_bound(v.begin(), v.end(), m) - v.begin());
  }
  std::uint64_t others = 0;
  for (const auto& [k, v] : members_)
    others += static_cast<std::uint64_t>(std::lower_bound(v.begin(), v.end(), m) - v.begin());
  return m - others;
}

std::uint64_t Schedule::C(std::uint64_t m) const {
  if (m >= cumulative_.size()) throw std::out_of_range("Schedule::C: m beyond horizon");
  return cumulative_[m];
}

std::optional<std::uint64_t> Schedule::least_in_interval(std::uint64_t j, std::uint32_t n) const {
  const std::uint64_t K = this->K(n);
  const std::uint64_t lo = (j / K) * K;
  const std::uint64_t hi = std::min(lo + K, horizon());
  for (std::uint64_t l = lo; l < hi; ++l)
    if (f_[l] == n) return l;
  return std::nullopt;
}

bool Schedule::check_hitting(std::uint32_t n, std::uint64_t i_max) const {
  const std::uint64_t K = this->K(n);
  if ((i_max + 1) * K > horizon())
    throw std::out_of_range("Schedule::check_hitting: horizon too small");
  for (std::uint64_t i = 0; i <= i_max; ++i) {
    bool hit = false;
    for (std::uint64_t j = i * K; j < (i + 1) * K; ++j)
      if (f_[j] == n) {
        hit = true;
        break;
      }
    if (!hit) return false;
  }
  return true;
}

std::uint32_t density_tail_index(const Rational& epsilon) {
  if (epsilon <= Rational(0) || epsilon >= Rational(1))
    throw std::invalid_argument("density_tail_index: epsilon must lie in (0,1)");
  std::uint32_t t = 2;
  while (Rational(1, static_cast<long long>(1) << t) >= epsilon) {
    ++t;
    if (t >= 62) throw std::invalid_argument("density_tail_index: epsilon too small");
  }
  return t;
}

DensityReport Schedule::check_density(const Rational& epsilon, std::uint64_t m_max) const {
  if (m_max > horizon()) throw std::out_of_range("check_density: m_max beyond horizon");

  DensityReport rep;
  rep.epsilon = epsilon;
  const std::uint32_t t = density_tail_index(epsilon);
  rep.t = t;

  rep.tail_bound_ok = true;
  rep.per_n_bound_ok = true;
  rep.worst_ratio = Rational(0);
  rep.worst_m = 0;

  std::vector<std::uint64_t> count(max_n_ + 1, 0);
  std::uint64_t total = 0, tail = 0;
  const long long eps_num = epsilon.numerator(), eps_den = epsilon.denominator();
  for (std::uint64_t m = 1; m <= m_max; ++m) {
    const std::uint32_t n = f_[m - 1];
    count[n] += 1;
    total += g_.at(n);
    if (n > t) tail += g_.at(n);

    // tail ratio tail/total < epsilon, exactly
    if (static_cast<long long>(tail) * eps_den >= eps_num * static_cast<long long>(total))
      rep.tail_bound_ok = false;
    // track the worst ratio
    if (static_cast<long long>(tail) * rep.worst_ratio.denominator() >
        rep.worst_ratio.numerator() * static_cast<long long>(total)) {
      rep.worst_ratio = Rational(static_cast<long long>(tail), static_cast<long long>(total));
      rep.worst_m = m;
    }
    // displayed per-n inequality: |A_n cap m| g(n) 2^n < total, for n > t
    for (std::uint32_t nn = t + 1; nn <= max_n_; ++nn) {
      if (count[nn] == 0) continue;
      const std::uint64_t lhs = count[nn] * g_.at(nn) * (std::uint64_t{1} << nn);
      if (lhs >= total) rep.per_n_bound_ok = false;
    }
  }
  return rep;
}

}  // namespace irs
