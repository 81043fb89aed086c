#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "fpp/random.hpp"

namespace fpp {

// Samplers and evaluators for the limiting objects the recentered diameter
// converges to: the Gumbel pair-sum array D(m), the Poisson-count
// approximation Xi_alpha, Xi itself via a truncated point process, its dual
// Q = exp(-Xi) via partial-sum pair minima, and the tail formulas for Q.

// Upper-triangular array of G_a + G_b - G_ab over pairs a < b of m indices,
// with per-index and per-pair standard Gumbels.
struct DArray {
  std::uint32_t m = 0;
  std::vector<double> entries;  // (0,1),(0,2),...,(1,2),... order

  std::size_t index(std::uint32_t a, std::uint32_t b) const;
  double at(std::uint32_t a, std::uint32_t b) const { return entries[index(a, b)]; }
};

struct XiSample {
  double value = 0.0;
  double inner_level = 0.0;  // A: the maximum restricted to points >= -A
  double outer_level = 0.0;  // A+B: all generated points
  bool stable = false;       // maxima at both levels coincide
  std::pair<std::uint32_t, std::uint32_t> argpair{0, 0};
  bool degenerate = false;  // fewer than two points at the outer level
};

enum class TailMethod { Direct, ProductFormula, LowerBound };

struct TailEstimate {
  double x = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  TailMethod method = TailMethod::Direct;
};

struct XiMoments {
  double mean = 0.0;
  double variance = 0.0;
  std::pair<double, double> mean_ci{0.0, 0.0};
  std::pair<double, double> variance_ci{0.0, 0.0};
  std::uint64_t stable_count = 0;
  std::uint64_t unstable_count = 0;  // includes degenerate draws
};

// m vertex Gumbels then m(m-1)/2 pair Gumbels, drawn sequentially from the
// stream (stub-friendly order).
DArray sample_d_array(RandomStream& stream, std::uint32_t m);

// max over pairs s < t <= N of (G_s + G_t - G_st) - 2 alpha with
// N ~ Poisson(e^alpha). Returns -infinity when N < 2 (a tagged value, so
// Monte Carlo loops stay total). Draw order: N, vertex Gumbels, pair Gumbels.
double sample_xi_alpha(RandomStream& stream, double alpha);

// Deterministic core of the Xi maximisation over an explicit descending point
// list: value = max over pairs of Y_s + Y_t - pair_weight(s, t), with the
// restricted maximum over points >= inner_floor tracked for the stability
// flag. weight_min is a lower bound on pair_weight values; pairs whose point
// sum cannot beat the running maximum even at that bound are skipped, which
// keeps the scan far below all-pairs cost. Pass -infinity to force evaluation
// of every pair. Throws if points are not strictly descending.
XiSample xi_from_points(const std::vector<double>& points,
                        const std::function<double(std::uint32_t, std::uint32_t)>& pair_weight,
                        double inner_floor, double weight_min);

// Xi via the truncated construction: points from the intensity-gamma
// exponential Poisson process down to -(inner_a + outer_b), pair Gumbels
// keyed lazily by the point pair so the inner- and outer-level maxima see
// identical weights on shared pairs. Requires gamma > 0 and outer_b > 0.
XiSample sample_xi(RandomStream& stream, double gamma, double inner_a, double outer_b);

// Q = min over pairs s < t of S_s S_t / E'_st with S_s partial sums of unit
// exponentials. The sequence is extended until the probability that any
// unexamined pair beats the current minimum is below delta; the per-pair beat
// chance exp(-S_s S_t / q) is summed over realized s with a geometric bound
// over future t. Draw order per step T: the increment of S_T, then E'_sT for
// s = 1..T-1. Requires delta in (0,1).
double sample_q(RandomStream& stream, double delta);

// Monte Carlo indicator estimate of P(Q > x) from independent sample_q draws
// (replicate r uses stream.derive(r)); binomial standard error.
TailEstimate tail_q_direct(const RandomStream& stream, double x, std::uint32_t replicates,
                           double delta);

// P(Q > x) as the mean over replicates of prod_{s<t} (1 - exp(-S_s S_t / x)),
// truncated once the omitted log-factors are bounded below 1e-8 in total;
// pair_cap caps the evaluated pairs per replicate as a safety stop.
TailEstimate tail_q_product(const RandomStream& stream, double x, std::uint64_t pair_cap,
                            std::uint32_t replicates);

// Deterministic lower bound exp(-1) * exp(I(x)) with
// I(x) = int_0^inf int_0^inf log(1 - exp(-(u+1)(v+1)/x)) du dv, by nested
// adaptive quadrature to absolute error 1e-6 on the log-integral.
double tail_q_lower_bound(double x);

// Mean/variance of Xi from stable samples at the given truncation, with 95%
// percentile-bootstrap intervals. Unstable and degenerate draws are counted
// and excluded; throws if their fraction exceeds 5%. Requires replicates >= 100.
XiMoments estimate_xi_moments(const RandomStream& stream, std::uint32_t replicates,
                              double inner_a, double outer_b);

}  // namespace fpp
