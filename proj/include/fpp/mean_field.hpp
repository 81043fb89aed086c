#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "fpp/random.hpp"

namespace fpp {

// Thrown when an operation would exceed its configured size budget, and by
// rejection experiments that exhaust their attempt budget.
struct BudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SmallestWeightTree {
  std::uint32_t source = 0;
  std::vector<double> dist;        // dist[source] = 0
  std::vector<std::int64_t> parent;  // -1 at the source
  std::vector<std::uint32_t> hops;
};

struct MinEdgeProfile {
  std::vector<double> x_min;         // minimal incident weight per vertex
  std::vector<std::uint32_t> order;  // vertices sorted by x_min descending,
                                     // ties broken by vertex index ascending
};

enum class SwgStopReason { SizeReached, TimeReached, TargetHit };

struct SwgEvent {
  double time;
  std::uint32_t vertex;
};

struct SwgTrace {
  std::uint32_t source = 0;
  std::vector<SwgEvent> events;  // settle order; starts with (0, source)
  SwgStopReason stop_reason = SwgStopReason::SizeReached;
};

struct SwgStop {
  enum class Kind { Size, Time, Target } kind = Kind::Size;
  std::uint32_t size = 0;
  double time = 0.0;
  std::vector<std::uint32_t> target;

  static SwgStop by_size(std::uint32_t k) { return {Kind::Size, k, 0.0, {}}; }
  static SwgStop by_time(double t) { return {Kind::Time, 0, t, {}}; }
  static SwgStop by_target(std::vector<std::uint32_t> b) {
    return {Kind::Target, 0, 0.0, std::move(b)};
  }
};

enum class DiameterMode { Exact, Candidate };

struct DiameterResult {
  double value = 0.0;
  std::pair<std::uint32_t, std::uint32_t> endpoints{0, 0};
  DiameterMode mode = DiameterMode::Exact;
  std::uint32_t sources_explored = 0;
};

// Row-major all-pairs distance matrix.
struct AllPairsDistances {
  std::uint32_t n = 0;
  std::vector<double> d;

  double at(std::uint32_t i, std::uint32_t j) const {
    return d[static_cast<std::size_t>(i) * n + j];
  }
};

// Exact single-source shortest paths on the implicit complete graph; dense
// scan, O(n^2) time and O(n) memory (no priority queue, no edge storage).
SmallestWeightTree smallest_weight_tree(const EdgeWeightOracle& oracle, std::uint32_t source);

// Tree grown only until `target` settles; dist/parent/hops are valid for the
// settled prefix, unsettled vertices keep dist = +inf. Saves roughly half the
// work of a full tree for a uniform target; used by the two-point and
// hopcount experiments.
SmallestWeightTree tree_to_target(const EdgeWeightOracle& oracle, std::uint32_t source,
                                  std::uint32_t target);

// Percolation flow from a source, stopped by cluster size, elapsed time, or
// first hit of a target set. When stopped by a target, the final event time
// equals the distance from the source to the set.
SwgTrace swg_growth(const EdgeWeightOracle& oracle, std::uint32_t source, const SwgStop& stop);

// Time for the flow from `source` to reach every vertex.
double flooding(const EdgeWeightOracle& oracle, std::uint32_t source);

// Max of the distance over all ordered pairs, via n single-source runs over a
// materialized weight table. Throws BudgetExceeded when n > budget.
DiameterResult diameter_exact(const EdgeWeightOracle& oracle, std::uint32_t budget = 4000);

// Diameter restricted to the k vertices with the largest minimal incident
// edge weight; sound lower bound for the exact diameter.
DiameterResult diameter_candidate(const EdgeWeightOracle& oracle, std::uint32_t k_candidates);

// Default candidate count, ceil(4 log n): the slow-vertex profile is
// asymptotically Poisson with e^a vertices above log n - a.
std::uint32_t default_candidate_count(std::uint32_t n);

MinEdgeProfile min_edge_profile(const EdgeWeightOracle& oracle);

// #{i : x_min[i] >= log n - alpha}.
std::uint64_t count_slow(const MinEdgeProfile& profile, double alpha);

// Ordered pairs (i,j) with X_(i) <= log n - alpha, X_(j) <= log n + alpha/2
// and d_w(i,j) >= 3 log n - alpha/8.
std::uint64_t count_bad_pairs(const AllPairsDistances& dist, const MinEdgeProfile& profile,
                              double alpha);

AllPairsDistances all_pairs_distances(const EdgeWeightOracle& oracle);

struct HopcountStats {
  std::uint32_t typical_hop = 0;  // hops to a uniform non-source target
  std::uint32_t max_hop = 0;
};

HopcountStats hopcount_stats(const SmallestWeightTree& tree, RandomStream& stream);

std::uint32_t max_hopcount(const std::vector<SmallestWeightTree>& trees);

// Height of a single tree (max hops); building block for the all-source
// maximal hopcount.
std::uint32_t tree_height(const SmallestWeightTree& tree);

// Unique root of x log x - x = 1, the growth constant of the all-source
// maximal hopcount (~3.5911).
double max_hopcount_constant();

struct JointDistanceResult {
  // Recentered pairwise distances d_w(a,b) - log n for the first m vertices,
  // in (0,1),(0,2),...,(1,2),... order.
  std::vector<double> recentered;
  // True iff a third tagged vertex lies on some tagged pair's geodesic.
  bool interior_hit = false;
};

JointDistanceResult joint_distance_experiment(const EdgeWeightOracle& oracle, std::uint32_t m);

struct ConditionalSlowResult {
  // d_w(V_i,V_j) - 3 log n + 2 alpha, m(m-1)/2 entries per accepted instance.
  std::vector<double> recentered;
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
};

// Plain rejection over independent instances, keeping those with exactly m
// slow vertices at level alpha. Throws BudgetExceeded if the attempt budget
// runs out with zero acceptances.
ConditionalSlowResult conditional_slow_experiment(const RandomStream& stream, std::uint32_t n,
                                                  double alpha, std::uint32_t m,
                                                  std::uint64_t budget);

}  // namespace fpp
