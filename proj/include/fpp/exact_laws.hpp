#pragma once

#include <cstdint>
#include <utility>

#include "fpp/random.hpp"

namespace fpp {

// Exact finite-n distributional representations for exploration hitting times
// on the complete graph with exponential mean-n edge weights, plus the
// closed-form bounds used by the slow-vertex and bad-pair experiments. These
// are the oracles the graph simulator is verified against.

struct UrnSpec {
  std::uint64_t black = 0;
  std::uint64_t white = 0;
};

struct SetDistanceSample {
  double distance = 0.0;
  std::uint64_t steps = 0;  // urn waiting time N
};

// Number of draws without replacement until the first black ball;
// P(N > k) = prod_{i<k} (white-i)/(black+white-i). Requires black >= 1.
std::uint64_t sample_urn_waiting_time(RandomStream& stream, const UrnSpec& spec);

// Distance between disjoint vertex sets of sizes a_size and b_size:
// sum_{k=a_size}^{N+a_size-1} E_k / (k(n-k)) with E_k exponential mean n and
// N the urn waiting time for black = b_size, white = n - a_size - b_size.
SetDistanceSample sample_set_distance(RandomStream& stream, std::uint32_t n,
                                      std::uint32_t a_size, std::uint32_t b_size);

// Two-point distance: sum_{k=1}^{N} E_k / (k(n-k)), N uniform on {1..n-1}.
double sample_two_point_distance(RandomStream& stream, std::uint32_t n);

// S_N = sum_{k=2}^{N-1} n E'_k / (k(n-k)) with E'_k mean one and N the
// minimum of a uniformly random distinct pair of ranks in {2..n-1}. The
// closed-form pmf sometimes quoted for N is only asymptotic (it does not
// normalize at finite n); the constructive pair-minimum law used here is the
// authoritative one, pinned by a brute-force enumeration oracle in the
// tests. Value 0 when N = 2 (empty sum).
std::pair<double, std::uint64_t> sample_min_pair_sum(RandomStream& stream, std::uint32_t n);

// Limit constant of the random-sum tail bound P(S_N >= log n + x) <= C e^{-ax}:
// C(a) = 2 * int_0^1 u^a (1-u)^{1-a} du, by quadrature to relative error 1e-8.
// Finite and increasing on (0,2), divergent as a -> 2.
double tail_bound_constant(double a);

// Count of vertices whose minimal incident edge weight is >= log n - alpha,
// sampled directly from the per-vertex marginal: the minimum of n-1
// exponentials of mean n is exponential with mean n/(n-1), drawn i.i.d.
// across vertices (the weak cross-vertex dependence is what the Poisson
// acceptance check bounds). O(n) per replicate, no edge table.
std::uint64_t sample_slow_count(RandomStream& stream, std::uint32_t n, double alpha);

// E[N_n(alpha)] = n * exp(-(n-1)(log n - alpha)/n) = (1+eps_n) e^alpha with
// eps_n = exp((log n - alpha)/n) - 1.
double expected_slow_count(std::uint32_t n, double alpha);

// Stein-Chen total variation bound for N_n(alpha) against its Poisson limit:
// 2 (1+eps_n) e^{2 alpha} log n / n.
double stein_chen_bound(std::uint32_t n, double alpha);

}  // namespace fpp
