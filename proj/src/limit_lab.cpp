#include "fpp/limit_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fpp/quadrature.hpp"
#include "fpp/stats.hpp"

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Smallest value sample_gumbel can produce: the uniform grid bottoms out at
// 2^-53, so -log(-log(u)) >= -log(53 log 2) ~ -3.605. Rounded down for margin.
constexpr double kGumbelMin = -3.7;

// Label separating the lazily keyed pair-weight streams from other children
// of the stream handed to sample_xi.
constexpr std::uint64_t kPairWeightLabel = 0x70616972ULL;  // "pair"

}  // namespace

std::size_t DArray::index(std::uint32_t a, std::uint32_t b) const {
  if (a >= b || b >= m) throw std::out_of_range("DArray::index: need a < b < m");
  // Rows above row a hold sum_{r<a} (m-r-1) = a*m - a(a-1)/2 - a entries.
  const std::size_t row_start =
      static_cast<std::size_t>(a) * m - static_cast<std::size_t>(a) * (a - 1) / 2 - a;
  return row_start + (b - a - 1);
}

DArray sample_d_array(RandomStream& stream, std::uint32_t m) {
  if (m < 2) throw std::invalid_argument("sample_d_array: need m >= 2");
  DArray d;
  d.m = m;
  std::vector<double> vertex(m);
  for (auto& g : vertex) g = sample_gumbel(stream);
  d.entries.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  for (std::uint32_t a = 0; a < m; ++a)
    for (std::uint32_t b = a + 1; b < m; ++b)
      d.entries.push_back(vertex[a] + vertex[b] - sample_gumbel(stream));
  return d;
}

double sample_xi_alpha(RandomStream& stream, double alpha) {
  const std::uint64_t count = sample_poisson(stream, std::exp(alpha));
  if (count < 2) return -kInf;
  std::vector<double> vertex(count);
  for (auto& g : vertex) g = sample_gumbel(stream);
  double best = -kInf;
  for (std::uint64_t s = 0; s < count; ++s)
    for (std::uint64_t t = s + 1; t < count; ++t)
      best = std::max(best, vertex[s] + vertex[t] - sample_gumbel(stream));
  return best - 2.0 * alpha;
}

XiSample xi_from_points(const std::vector<double>& points,
                        const std::function<double(std::uint32_t, std::uint32_t)>& pair_weight,
                        double inner_floor, double weight_min) {
  for (std::size_t i = 0; i + 1 < points.size(); ++i)
    if (!(points[i] > points[i + 1]))
      throw std::invalid_argument("xi_from_points: points must be strictly descending");

  XiSample out;
  out.value = -kInf;
  if (points.size() < 2) {
    out.degenerate = true;
    return out;
  }
  const auto count = static_cast<std::uint32_t>(points.size());
  std::uint32_t n_inner = 0;
  while (n_inner < count && points[n_inner] >= inner_floor) ++n_inner;

  // Restricted maximum over the inner block, evaluated exhaustively.
  double best_inner = -kInf;
  std::pair<std::uint32_t, std::uint32_t> arg{0, 0};
  for (std::uint32_t s = 0; s < n_inner; ++s) {
    for (std::uint32_t t = s + 1; t < n_inner; ++t) {
      const double v = points[s] + points[t] - pair_weight(s, t);
      if (v > best_inner) {
        best_inner = v;
        arg = {s, t};
      }
    }
  }

  // Remaining pairs in an order whose best-possible value is nonincreasing,
  // so a pair sum that cannot reach the running maximum even at weight_min
  // ends the scan. No pair is evaluated twice; shared pairs reuse
  // pair_weight's deterministic values.
  double best = best_inner;
  for (std::uint32_t s = 0; s + 1 < count; ++s) {
    const std::uint32_t t0 = std::max(s + 1, n_inner);
    if (t0 >= count) break;
    if (points[s] + points[t0] - weight_min <= best) break;
    for (std::uint32_t t = t0; t < count; ++t) {
      if (points[s] + points[t] - weight_min <= best) break;
      const double v = points[s] + points[t] - pair_weight(s, t);
      if (v > best) {
        best = v;
        arg = {s, t};
      }
    }
  }
  out.value = best;
  out.argpair = arg;
  out.stable = n_inner >= 2 && best == best_inner;
  return out;
}

XiSample sample_xi(RandomStream& stream, double gamma, double inner_a, double outer_b) {
  if (!(gamma > 0.0)) throw std::invalid_argument("sample_xi: gamma must be positive");
  if (!(outer_b > 0.0)) throw std::invalid_argument("sample_xi: outer margin must be positive");
  const std::vector<double> points = sample_ppp(stream, gamma, -(inner_a + outer_b));
  const RandomStream pair_base = stream.derive(kPairWeightLabel);
  const auto weight = [&pair_base](std::uint32_t s, std::uint32_t t) {
    RandomStream ps =
        pair_base.derive((static_cast<std::uint64_t>(s) << 32) | static_cast<std::uint64_t>(t));
    return sample_gumbel(ps);
  };
  XiSample out = xi_from_points(points, weight, -inner_a, kGumbelMin);
  out.inner_level = inner_a;
  out.outer_level = inner_a + outer_b;
  return out;
}

namespace {

// Upper bound on the chance that a pair not yet examined at step T beats q:
// exp(-S_s S_t / q) summed exactly over realized s with the geometric tail
// over future t (ratio q/(q+S_s) <= q/S_s), plus the both-future block.
double unexamined_beat_bound(const std::vector<double>& sums, double q) {
  const double s_top = sums.back();
  double bound = 0.0;
  for (const double s : sums) bound += std::exp(-s * s_top / q) * (q / s);
  const double r = q / s_top;
  return bound + std::exp(-s_top * s_top / q) * r * r;
}

}  // namespace

double sample_q(RandomStream& stream, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("sample_q: delta must lie in (0,1)");
  std::vector<double> sums{sample_exponential(stream, 1.0)};
  double q = kInf;
  for (;;) {
    sums.push_back(sums.back() + sample_exponential(stream, 1.0));
    const double s_top = sums.back();
    for (std::size_t s = 0; s + 1 < sums.size(); ++s)
      q = std::min(q, sums[s] * s_top / sample_exponential(stream, 1.0));
    if (unexamined_beat_bound(sums, q) < delta) return q;
  }
}

TailEstimate tail_q_direct(const RandomStream& stream, double x, std::uint32_t replicates,
                           double delta) {
  if (!(x > 0.0)) throw std::invalid_argument("tail_q_direct: x must be positive");
  if (replicates < 1) throw std::invalid_argument("tail_q_direct: need replicates >= 1");
  std::uint64_t hits = 0;
  for (std::uint32_t r = 0; r < replicates; ++r) {
    RandomStream sub = stream.derive(r);
    if (sample_q(sub, delta) > x) ++hits;
  }
  TailEstimate est;
  est.x = x;
  est.method = TailMethod::Direct;
  est.estimate = static_cast<double>(hits) / replicates;
  est.std_error = std::sqrt(est.estimate * (1.0 - est.estimate) / replicates);
  return est;
}

TailEstimate tail_q_product(const RandomStream& stream, double x, std::uint64_t pair_cap,
                            std::uint32_t replicates) {
  if (!(x > 0.0)) throw std::invalid_argument("tail_q_product: x must be positive");
  if (replicates < 1) throw std::invalid_argument("tail_q_product: need replicates >= 1");
  double acc = 0.0, acc_sq = 0.0;
  for (std::uint32_t r = 0; r < replicates; ++r) {
    RandomStream sub = stream.derive(r);
    std::vector<double> sums{sample_exponential(sub, 1.0)};
    double log_prod = 0.0;
    std::uint64_t pairs = 0;
    while (pairs < pair_cap) {
      sums.push_back(sums.back() + sample_exponential(sub, 1.0));
      const double s_top = sums.back();
      for (std::size_t s = 0; s + 1 < sums.size() && pairs < pair_cap; ++s, ++pairs)
        log_prod += std::log1p(-std::exp(-sums[s] * s_top / x));
      // |log(1-e)| <= 2e for the small omitted factors, so a beat bound below
      // 5e-9 keeps the total omitted log mass under 1e-8.
      if (unexamined_beat_bound(sums, x) < 5e-9) break;
    }
    const double p = std::exp(log_prod);
    acc += p;
    acc_sq += p * p;
  }
  TailEstimate est;
  est.x = x;
  est.method = TailMethod::ProductFormula;
  est.estimate = acc / replicates;
  const double var =
      replicates > 1 ? std::max(0.0, (acc_sq - acc * acc / replicates) / (replicates - 1)) : 0.0;
  est.std_error = std::sqrt(var / replicates);
  return est;
}

double tail_q_lower_bound(double x) {
  if (!(x > 0.0)) throw std::invalid_argument("tail_q_lower_bound: x must be positive");
  // Beyond (u+1)(v+1)/x = 45 the integrand is below e^-45 in magnitude; the
  // truncated tail is negligible against the 1e-6 budget.
  const double z_cap = 45.0;
  const double u_max = z_cap * x - 1.0;
  if (u_max <= 0.0) return std::exp(-1.0);
  const auto inner = [x, z_cap](double u) {
    const double v_max = z_cap * x / (u + 1.0) - 1.0;
    if (v_max <= 0.0) return 0.0;
    return adaptive_simpson(
        [x, u](double v) { return std::log1p(-std::exp(-(u + 1.0) * (v + 1.0) / x)); }, 0.0,
        v_max, 1e-9);
  };
  const double log_integral = adaptive_simpson(inner, 0.0, u_max, 5e-7);
  return std::exp(-1.0 + log_integral);
}

XiMoments estimate_xi_moments(const RandomStream& stream, std::uint32_t replicates,
                              double inner_a, double outer_b) {
  if (replicates < 100)
    throw std::invalid_argument("estimate_xi_moments: need replicates >= 100");
  std::vector<double> values;
  values.reserve(replicates);
  std::uint64_t unstable = 0;
  for (std::uint32_t r = 0; r < replicates; ++r) {
    RandomStream sub = stream.derive(r);
    const XiSample s = sample_xi(sub, 1.0, inner_a, outer_b);
    if (s.degenerate || !s.stable) {
      ++unstable;
      continue;
    }
    values.push_back(s.value);
  }
  if (unstable * 20 > replicates)
    throw std::runtime_error("estimate_xi_moments: unstable fraction exceeds 5%");

  const EmpiricalDistribution dist(std::move(values));
  XiMoments out;
  out.mean = dist.mean();
  out.variance = dist.variance();
  out.stable_count = dist.count();
  out.unstable_count = unstable;
  const auto mean_stat = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  const auto var_stat = [mean_stat](const std::vector<double>& v) {
    const double m = mean_stat(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return v.size() > 1 ? s / static_cast<double>(v.size() - 1) : 0.0;
  };
  out.mean_ci = bootstrap_ci(dist, mean_stat, 0.95, 500, stream.derive(0xb001));
  out.variance_ci = bootstrap_ci(dist, var_stat, 0.95, 500, stream.derive(0xb002));
  return out;
}

}  // namespace fpp
