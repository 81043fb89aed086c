#include "fpp/exact_laws.hpp"

#include <cmath>
#include <stdexcept>

#include "fpp/quadrature.hpp"

namespace fpp {

std::uint64_t sample_urn_waiting_time(RandomStream& stream, const UrnSpec& spec) {
  if (spec.black < 1)
    throw std::invalid_argument("sample_urn_waiting_time: need at least one black ball");
  std::uint64_t white_left = spec.white;
  for (std::uint64_t k = 1;; ++k) {
    const double total = static_cast<double>(spec.black + white_left);
    // One uniform per draw; a larger black count stops no later on the same
    // stream, which is the coupling the monotonicity property relies on.
    if (stream.next_uniform() * total < static_cast<double>(spec.black)) return k;
    --white_left;
  }
}

SetDistanceSample sample_set_distance(RandomStream& stream, std::uint32_t n,
                                      std::uint32_t a_size, std::uint32_t b_size) {
  if (a_size < 1 || b_size < 1 || static_cast<std::uint64_t>(a_size) + b_size > n)
    throw std::invalid_argument("sample_set_distance: infeasible set sizes");
  const std::uint64_t steps =
      sample_urn_waiting_time(stream, {b_size, n - a_size - b_size});
  const double nd = static_cast<double>(n);
  double dist = 0.0;
  for (std::uint64_t k = a_size; k < a_size + steps; ++k) {
    const double kd = static_cast<double>(k);
    dist += sample_exponential(stream, nd) / (kd * (nd - kd));
  }
  return {dist, steps};
}

double sample_two_point_distance(RandomStream& stream, std::uint32_t n) {
  if (n < 2) throw std::invalid_argument("sample_two_point_distance: need n >= 2");
  auto steps = static_cast<std::uint64_t>(stream.next_uniform() * (n - 1));
  if (steps > n - 2) steps = n - 2;  // guard the u -> 1 edge of the grid
  steps += 1;                        // N uniform on {1..n-1}
  const double nd = static_cast<double>(n);
  double dist = 0.0;
  for (std::uint64_t k = 1; k <= steps; ++k) {
    const double kd = static_cast<double>(k);
    dist += sample_exponential(stream, nd) / (kd * (nd - kd));
  }
  return dist;
}

std::pair<double, std::uint64_t> sample_min_pair_sum(RandomStream& stream, std::uint32_t n) {
  if (n < 5) throw std::invalid_argument("sample_min_pair_sum: need n >= 5");
  // Uniform distinct ordered pair of ranks in {2..n-1}.
  auto i = static_cast<std::uint64_t>(stream.next_uniform() * (n - 2));
  if (i > n - 3) i = n - 3;
  auto j = static_cast<std::uint64_t>(stream.next_uniform() * (n - 3));
  if (j > n - 4) j = n - 4;
  if (j >= i) ++j;
  const std::uint64_t rank_min = 2 + (i < j ? i : j);
  const double nd = static_cast<double>(n);
  double value = 0.0;
  for (std::uint64_t k = 2; k < rank_min; ++k) {
    const double kd = static_cast<double>(k);
    value += sample_exponential(stream, 1.0) * nd / (kd * (nd - kd));
  }
  return {value, rank_min};
}

double tail_bound_constant(double a) {
  if (!(a > 0.0 && a < 2.0))
    throw std::invalid_argument("tail_bound_constant: a must lie in (0,2)");
  // Integrand has an integrable (1-u)^{1-a} singularity at u=1 for a > 1;
  // tanh-sinh nodes cluster there.
  return tanh_sinh_01(
      [a](double u, double omu) { return 2.0 * std::pow(u, a) * std::pow(omu, 1.0 - a); },
      1e-9);
}

std::uint64_t sample_slow_count(RandomStream& stream, std::uint32_t n, double alpha) {
  if (n < 2) throw std::invalid_argument("sample_slow_count: need n >= 2");
  const double nd = static_cast<double>(n);
  const double mean = nd / (nd - 1.0);
  const double threshold = std::log(nd) - alpha;
  std::uint64_t count = 0;
  for (std::uint32_t i = 0; i < n; ++i)
    if (sample_exponential(stream, mean) >= threshold) ++count;
  return count;
}

double expected_slow_count(std::uint32_t n, double alpha) {
  if (n < 2) throw std::invalid_argument("expected_slow_count: need n >= 2");
  const double nd = static_cast<double>(n);
  return nd * std::exp(-(nd - 1.0) * (std::log(nd) - alpha) / nd);
}

double stein_chen_bound(std::uint32_t n, double alpha) {
  if (n < 2) throw std::invalid_argument("stein_chen_bound: need n >= 2");
  const double nd = static_cast<double>(n);
  const double eps_n = std::exp((std::log(nd) - alpha) / nd) - 1.0;
  return 2.0 * (1.0 + eps_n) * std::exp(2.0 * alpha) * std::log(nd) / nd;
}

}  // namespace fpp
