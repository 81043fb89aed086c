#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "fpp/exact_laws.hpp"
#include "fpp/limit_lab.hpp"
#include "fpp/mean_field.hpp"
#include "fpp/random.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

// 3-vertex instance with a hand-checkable metric: w(0,1)=1, w(1,2)=1, w(0,2)=3.
TableEdgeOracle tiny_triangle() {
  TableEdgeOracle t(3, 1.0);
  t.set_weight(0, 1, 1.0);
  t.set_weight(1, 2, 1.0);
  t.set_weight(0, 2, 3.0);
  return t;
}

// Bellman-Ford on the fully materialized weights; independent of the scan
// order used by the tree builder. Relaxation sums every path left to right,
// so agreement with the dense scan is exact in floating point.
std::vector<double> bellman_ford(const EdgeWeightOracle& o, std::uint32_t source) {
  const std::uint32_t n = o.n();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  dist[source] = 0.0;
  for (std::uint32_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (std::uint32_t u = 0; u < n; ++u) {
      if (dist[u] == std::numeric_limits<double>::infinity()) continue;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (v == u) continue;
        const double nd = dist[u] + o.weight(u, v);
        if (nd < dist[v]) {
          dist[v] = nd;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return dist;
}

}  // namespace

TEST_CASE("smallest weight tree on a hand-checkable instance") {
  const TableEdgeOracle t = tiny_triangle();
  const SmallestWeightTree tree = smallest_weight_tree(t, 0);
  CHECK(tree.source == 0);
  CHECK(tree.dist == std::vector<double>{0.0, 1.0, 2.0});
  CHECK(tree.parent == std::vector<std::int64_t>{-1, 0, 1});
  CHECK(tree.hops == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(tree_height(tree) == 2);
  CHECK(max_hopcount({tree}) == 2);

  CHECK(flooding(t, 2) == 2.0);

  const DiameterResult d = diameter_exact(t);
  CHECK(d.value == 2.0);
  CHECK(d.endpoints == std::pair<std::uint32_t, std::uint32_t>{0, 2});
  CHECK(d.mode == DiameterMode::Exact);
  CHECK(d.sources_explored == 3);

  const MinEdgeProfile p = min_edge_profile(t);
  CHECK(p.x_min == std::vector<double>{1.0, 1.0, 1.0});
  CHECK(p.order == std::vector<std::uint32_t>{0, 1, 2});  // tie-break by index

  RandomStream stub = RandomStream::stub({0.6});
  const HopcountStats h = hopcount_stats(tree, stub);
  CHECK(h.typical_hop == 2);  // uniform pick lands on vertex 2
  CHECK(h.max_hop == 2);

  CHECK_THROWS_AS(smallest_weight_tree(t, 3), std::out_of_range);
  CHECK_THROWS_AS(tree_to_target(t, 0, 0), std::out_of_range);
}

TEST_CASE("tree invariants hold on random instances") {
  const RandomStream parent(20);
  const std::uint32_t n = 40;
  for (int rep = 0; rep < 20; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const std::uint32_t source = static_cast<std::uint32_t>(rep) % n;
    const SmallestWeightTree tree = smallest_weight_tree(o, source);
    CHECK(tree.dist[source] == 0.0);
    CHECK(tree.parent[source] == -1);
    CHECK(tree.hops[source] == 0);
    for (std::uint32_t v = 0; v < n; ++v) {
      if (v == source) continue;
      const auto p = static_cast<std::uint32_t>(tree.parent[v]);
      CHECK(tree.dist[v] > 0.0);
      CHECK(tree.dist[v] == tree.dist[p] + o.weight(p, v));  // exact by construction
      CHECK(tree.hops[v] == tree.hops[p] + 1);
      CHECK(tree.dist[p] <= tree.dist[v]);
    }
    // Metric optimality: no edge can shortcut any settled distance.
    for (std::uint32_t u = 0; u < n; ++u)
      for (std::uint32_t v = 0; v < n; ++v)
        if (u != v) CHECK(tree.dist[v] <= tree.dist[u] + o.weight(u, v));
  }
}

TEST_CASE("dense scan equals Bellman-Ford exactly over 100 seeds") {
  const RandomStream parent(21);
  const std::uint32_t n = 40;
  for (int rep = 0; rep < 100; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const std::uint32_t source = static_cast<std::uint32_t>(rep) % n;
    const SmallestWeightTree tree = smallest_weight_tree(o, source);
    const std::vector<double> ref = bellman_ford(o, source);
    for (std::uint32_t v = 0; v < n; ++v) CHECK(tree.dist[v] == ref[v]);
  }
}

TEST_CASE("target-stopped tree matches the full tree at the target") {
  const RandomStream parent(22);
  const std::uint32_t n = 100;
  for (int rep = 0; rep < 20; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const std::uint32_t target = 1 + static_cast<std::uint32_t>(rep) % (n - 1);
    const SmallestWeightTree full = smallest_weight_tree(o, 0);
    const SmallestWeightTree part = tree_to_target(o, 0, target);
    CHECK(part.dist[target] == full.dist[target]);
    CHECK(part.hops[target] == full.hops[target]);
  }
}

TEST_CASE("growth trace equals the settle order of the full tree") {
  const RandomStream parent(23);
  const std::uint32_t n = 60;
  const HashedEdgeOracle o(n, parent.derive(0));
  const SmallestWeightTree tree = smallest_weight_tree(o, 5);
  const SwgTrace trace = swg_growth(o, 5, SwgStop::by_size(n));
  REQUIRE(trace.events.size() == n);
  CHECK(trace.stop_reason == SwgStopReason::SizeReached);
  CHECK(trace.events.front().time == 0.0);
  CHECK(trace.events.front().vertex == 5);
  for (std::size_t k = 0; k + 1 < trace.events.size(); ++k)
    CHECK(trace.events[k].time <= trace.events[k + 1].time);
  for (const SwgEvent& e : trace.events) CHECK(e.time == tree.dist[e.vertex]);
  // Flooding time is the last settle time.
  CHECK(trace.events.back().time == flooding(o, 5));
}

TEST_CASE("growth stop rules: size, target, time") {
  const RandomStream parent(24);
  const std::uint32_t n = 60;
  const HashedEdgeOracle o(n, parent.derive(0));

  const SwgTrace small = swg_growth(o, 0, SwgStop::by_size(7));
  CHECK(small.events.size() == 7);
  CHECK(small.stop_reason == SwgStopReason::SizeReached);

  const SwgTrace trivial = swg_growth(o, 0, SwgStop::by_size(1));
  CHECK(trivial.events.size() == 1);

  const SmallestWeightTree tree = smallest_weight_tree(o, 0);
  const std::vector<std::uint32_t> target{11, 12, 13};
  const SwgTrace hit = swg_growth(o, 0, SwgStop::by_target(target));
  CHECK(hit.stop_reason == SwgStopReason::TargetHit);
  double min_d = std::numeric_limits<double>::infinity();
  for (std::uint32_t v : target) min_d = std::min(min_d, tree.dist[v]);
  CHECK(hit.events.back().time == min_d);

  const SwgTrace self_hit = swg_growth(o, 12, SwgStop::by_target(target));
  CHECK(self_hit.events.size() == 1);
  CHECK(self_hit.stop_reason == SwgStopReason::TargetHit);

  const double t_cut = tree.dist[tree.dist.size() / 2];
  const SwgTrace timed = swg_growth(o, 0, SwgStop::by_time(t_cut + 1e-9));
  CHECK(timed.stop_reason == SwgStopReason::TimeReached);
  std::size_t expect = 0;
  for (double d : tree.dist)
    if (d <= t_cut + 1e-9) ++expect;
  CHECK(timed.events.size() == expect);
  for (const SwgEvent& e : timed.events) CHECK(e.time <= t_cut + 1e-9);

  CHECK_THROWS_AS(swg_growth(o, 0, SwgStop::by_target({})), std::invalid_argument);
  CHECK_THROWS_AS(swg_growth(o, 0, SwgStop::by_target({n})), std::out_of_range);
}

TEST_CASE("growth gaps are exponential with rate k(n-k)/n") {
  const RandomStream parent(25);
  const std::uint32_t n = 500;
  std::vector<double> scaled;
  scaled.reserve(200 * (n - 1));
  for (int rep = 0; rep < 200; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const SwgTrace trace = swg_growth(o, 0, SwgStop::by_size(n));
    for (std::size_t k = 1; k < trace.events.size(); ++k) {
      const double gap = trace.events[k].time - trace.events[k - 1].time;
      const double kd = static_cast<double>(k);
      scaled.push_back(gap * kd * (n - kd) / n);
    }
  }
  const double ks = ks_against_cdf(EmpiricalDistribution(std::move(scaled)),
                                   [](double x) { return 1.0 - std::exp(-x); });
  CHECK(ks <= 0.02);
}

TEST_CASE("cluster size at time t is dominated by the rate-1 branching mean") {
  const RandomStream parent(26);
  const std::uint32_t n = 500;
  const double t = 0.5 * std::log(static_cast<double>(n));
  double sum = 0.0, sumsq = 0.0;
  const int reps = 300;
  for (int rep = 0; rep < reps; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const auto size =
        static_cast<double>(swg_growth(o, 0, SwgStop::by_time(t)).events.size());
    sum += size;
    sumsq += size * size;
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sumsq - reps * mean * mean) / (reps - 1));
  CHECK(mean <= std::exp(t) + 3.0 * sd / std::sqrt(static_cast<double>(reps)));
  CHECK(mean >= 1.0);
}

TEST_CASE("diameter: dominance, relabeling invariance, budgets") {
  const RandomStream parent(27);
  const std::uint32_t n = 30;
  const HashedEdgeOracle o(n, parent.derive(0));
  const DiameterResult d = diameter_exact(o);
  for (std::uint32_t s = 0; s < n; s += 7) {
    const SmallestWeightTree tree = smallest_weight_tree(o, s);
    const double flood = flooding(o, s);
    CHECK(d.value >= flood);
    for (std::uint32_t v = 0; v < n; ++v) CHECK(flood >= tree.dist[v]);
  }

  // Relabel the vertices by an involution; the pair maximum cannot change.
  TableEdgeOracle relabeled(n, o.mean());
  auto perm = [n](std::uint32_t v) { return n - 1 - v; };
  for (std::uint32_t i = 0; i < n; ++i)
    for (std::uint32_t j = i + 1; j < n; ++j)
      relabeled.set_weight(perm(i), perm(j), o.weight(i, j));
  CHECK(diameter_exact(relabeled).value == d.value);

  CHECK_THROWS_AS(diameter_exact(o, 20), BudgetExceeded);
  CHECK_THROWS_AS(all_pairs_distances(HashedEdgeOracle(5000, parent.derive(1))),
                  BudgetExceeded);
}

TEST_CASE("exhaustive candidate mode equals exact mode") {
  const RandomStream parent(28);
  const std::uint32_t n = 60;
  for (int rep = 0; rep < 5; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const DiameterResult exact = diameter_exact(o);
    const DiameterResult cand = diameter_candidate(o, n);
    CHECK(cand.value == exact.value);
    CHECK(cand.mode == DiameterMode::Candidate);
  }
  const HashedEdgeOracle o(10, parent.derive(99));
  CHECK_THROWS_AS(diameter_candidate(o, 1), std::invalid_argument);
  CHECK_THROWS_AS(diameter_candidate(o, 11), std::invalid_argument);
}

TEST_CASE("candidate mode is a sound lower bound with high agreement") {
  const RandomStream parent(29);
  const std::uint32_t n = 500;
  int agree = 0;
  const int reps = 200;
  for (int rep = 0; rep < reps; ++rep) {
    const TableEdgeOracle table = TableEdgeOracle::materialize(
        HashedEdgeOracle(n, parent.derive(static_cast<std::uint64_t>(rep))));
    const DiameterResult exact = diameter_exact(table);
    const DiameterResult cand = diameter_candidate(table, 25);
    CHECK(cand.value <= exact.value);
    if (cand.value == exact.value) ++agree;
  }
  CHECK(static_cast<double>(agree) / reps >= 0.95);
}

TEST_CASE("default candidate count follows 4 log n") {
  CHECK(default_candidate_count(2) == 2);  // ceil(4 log 2) capped below by 2... and by n
  CHECK(default_candidate_count(1000) == 28);
  CHECK(default_candidate_count(3) == 3);  // capped at n
  CHECK(default_candidate_count(1000000) >= 2);
}

TEST_CASE("diameter over log n sits in the theoretical band") {
  const RandomStream parent(30);
  const std::uint32_t n = 500;
  double sum = 0.0;
  const int reps = 20;
  for (int rep = 0; rep < reps; ++rep) {
    const TableEdgeOracle table = TableEdgeOracle::materialize(
        HashedEdgeOracle(n, parent.derive(static_cast<std::uint64_t>(rep))));
    sum += diameter_exact(table).value;
  }
  const double ratio = sum / reps / std::log(static_cast<double>(n));
  CHECK(ratio >= 2.6);
  CHECK(ratio <= 3.6);
}

TEST_CASE("minimal edge marginal is exponential with mean n/(n-1)") {
  const RandomStream parent(31);
  const std::uint32_t n = 200;
  std::vector<double> pooled;
  pooled.reserve(50 * n);
  for (int rep = 0; rep < 50; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const MinEdgeProfile p = min_edge_profile(o);
    pooled.insert(pooled.end(), p.x_min.begin(), p.x_min.end());
  }
  const double rate = (n - 1.0) / n;
  const double ks = ks_against_cdf(EmpiricalDistribution(std::move(pooled)),
                                   [rate](double x) { return 1.0 - std::exp(-rate * x); });
  CHECK(ks <= 0.02);
}

TEST_CASE("slow-vertex and bad-pair counters on fabricated profiles") {
  MinEdgeProfile p;
  p.x_min = {2.0, 0.1, 2.0, 0.1};
  // threshold log 4 - alpha = 1.0
  CHECK(count_slow(p, std::log(4.0) - 1.0) == 2);
  CHECK(count_slow(p, -10.0) == 0);
  CHECK(count_slow(p, 10.0) == 4);

  MinEdgeProfile q;
  q.x_min = {0.1, 1.0, 2.0};
  AllPairsDistances dist;
  dist.n = 3;
  dist.d = {0.0, 5.0, 0.5,
            5.0, 0.0, 0.5,
            0.5, 0.5, 0.0};
  // alpha = 0.8: caps are log3 - 0.8 = 0.299 and log3 + 0.4 = 1.499;
  // distance threshold 3 log3 - 0.1 = 3.196. Only (0,1) qualifies.
  CHECK(count_bad_pairs(dist, q, 0.8) == 1);
  // A tiny alpha keeps every x_min under both caps but no distance is large.
  AllPairsDistances short_d = dist;
  short_d.d = {0.0, 0.5, 0.5, 0.5, 0.0, 0.5, 0.5, 0.5, 0.0};
  MinEdgeProfile small;
  small.x_min = {0.1, 0.2, 0.3};
  CHECK(count_bad_pairs(short_d, small, 0.5) == 0);
  CHECK_THROWS_AS(count_bad_pairs(dist, q, 0.0), std::invalid_argument);
  MinEdgeProfile wrong;
  wrong.x_min = {0.1, 0.2};
  CHECK_THROWS_AS(count_bad_pairs(dist, wrong, 0.5), std::invalid_argument);
}

TEST_CASE("all-pairs matrix is symmetric and matches single trees") {
  const RandomStream parent(32);
  const std::uint32_t n = 50;
  const HashedEdgeOracle o(n, parent.derive(0));
  const AllPairsDistances apd = all_pairs_distances(o);
  const SmallestWeightTree tree = smallest_weight_tree(o, 3);
  for (std::uint32_t v = 0; v < n; ++v) CHECK(apd.at(3, v) == tree.dist[v]);
  for (std::uint32_t i = 0; i < n; ++i) {
    CHECK(apd.at(i, i) == 0.0);
    for (std::uint32_t j = 0; j < n; ++j)
      CHECK(apd.at(i, j) == doctest::Approx(apd.at(j, i)).epsilon(1e-12));
  }
}

TEST_CASE("hopcount growth constant solves x log x - x = 1") {
  const double x = max_hopcount_constant();
  CHECK(x * std::log(x) - x == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(x == doctest::Approx(3.59112).epsilon(1e-5));
}

TEST_CASE("all-source maximal hopcount grows with n") {
  const RandomStream parent(33);
  auto mean_max_hop = [&parent](std::uint32_t n, std::uint64_t salt) {
    double sum = 0.0;
    for (int rep = 0; rep < 10; ++rep) {
      const TableEdgeOracle table = TableEdgeOracle::materialize(
          HashedEdgeOracle(n, parent.derive(salt + static_cast<std::uint64_t>(rep))));
      std::uint32_t best = 0;
      for (std::uint32_t s = 0; s < n; ++s)
        best = std::max(best, tree_height(smallest_weight_tree(table, s)));
      sum += best;
    }
    return sum / 10.0;
  };
  const double m100 = mean_max_hop(100, 0);
  const double m400 = mean_max_hop(400, 1000);
  CHECK(m400 > m100);
  // Loose sanity band around the alpha* log n / log log n growth scale.
  const double scale400 = max_hopcount_constant() * std::log(400.0) / std::log(std::log(400.0));
  CHECK(m400 >= 0.5 * scale400);
  CHECK(m400 <= 3.0 * scale400);
}

TEST_CASE("two tagged vertices reproduce the exact two-point law") {
  const RandomStream parent(34);
  const std::uint32_t n = 500;
  std::vector<double> sim(3000), oracle(10000);
  for (int rep = 0; rep < 3000; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const JointDistanceResult r = joint_distance_experiment(o, 2);
    REQUIRE(r.recentered.size() == 1);
    sim[static_cast<std::size_t>(rep)] = r.recentered[0];
  }
  RandomStream os = parent.derive(1ULL << 32);
  const double log_n = std::log(static_cast<double>(n));
  for (auto& v : oracle) v = sample_two_point_distance(os, n) - log_n;
  CHECK(ks_two_sample(EmpiricalDistribution(std::move(sim)),
                      EmpiricalDistribution(std::move(oracle))) <= 0.04);
}

TEST_CASE("four tagged vertices show the limit array structure") {
  const RandomStream parent(35);
  const std::uint32_t n = 1000;
  const int reps = 800;
  std::vector<std::vector<double>> entries(6, std::vector<double>(reps));
  int interior = 0;
  for (int rep = 0; rep < reps; ++rep) {
    const HashedEdgeOracle o(n, parent.derive(static_cast<std::uint64_t>(rep)));
    const JointDistanceResult r = joint_distance_experiment(o, 4);
    REQUIRE(r.recentered.size() == 6);
    for (int e = 0; e < 6; ++e)
      entries[static_cast<std::size_t>(e)][static_cast<std::size_t>(rep)] =
          r.recentered[static_cast<std::size_t>(e)];
    if (r.interior_hit) ++interior;
  }

  // Marginals against the Gumbel pair-sum limit.
  std::vector<double> limit(100000);
  RandomStream os = parent.derive(1ULL << 32);
  for (auto& v : limit) {
    const double g1 = sample_gumbel(os), g2 = sample_gumbel(os), g12 = sample_gumbel(os);
    v = g1 + g2 - g12;
  }
  const EmpiricalDistribution limit_dist(std::move(limit));
  for (int e = 0; e < 6; ++e)
    CHECK(ks_two_sample(EmpiricalDistribution(entries[static_cast<std::size_t>(e)]),
                        limit_dist) <= 0.08);

  auto corr = [&](int a, int b) {
    const auto& x = entries[static_cast<std::size_t>(a)];
    const auto& y = entries[static_cast<std::size_t>(b)];
    double mx = 0.0, my = 0.0;
    for (int i = 0; i < reps; ++i) {
      mx += x[static_cast<std::size_t>(i)];
      my += y[static_cast<std::size_t>(i)];
    }
    mx /= reps;
    my /= reps;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < reps; ++i) {
      const double dx = x[static_cast<std::size_t>(i)] - mx;
      const double dy = y[static_cast<std::size_t>(i)] - my;
      sxy += dx * dy;
      sxx += dx * dx;
      syy += dy * dy;
    }
    return sxy / std::sqrt(sxx * syy);
  };
  // Entries: 0=(0,1) 1=(0,2) 2=(0,3) 3=(1,2) 4=(1,3) 5=(2,3).
  const double shared = corr(0, 1);    // share vertex 0
  const double disjoint = corr(0, 5);  // (0,1) vs (2,3)
  CHECK(shared > disjoint);

  CHECK(static_cast<double>(interior) / reps <= 0.06);
  CHECK_THROWS_AS(joint_distance_experiment(HashedEdgeOracle(10, parent.derive(7)), 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(joint_distance_experiment(HashedEdgeOracle(10, parent.derive(7)), 11),
                  std::invalid_argument);
}

TEST_CASE("conditioning on two slow vertices recovers the pair-sum limit") {
  const RandomStream parent(36);
  const std::uint32_t n = 1000;
  const double alpha = 0.5;
  const ConditionalSlowResult res = conditional_slow_experiment(parent.derive(0), n, alpha, 2, 2200);
  REQUIRE(res.accepted >= 500);
  CHECK(res.recentered.size() == res.accepted);  // m(m-1)/2 = 1 per instance

  // Acceptance rate against the Poisson profile pmf at m = 2.
  const double lambda = expected_slow_count(n, alpha);
  const double p2 = poisson_pmf(2, lambda);
  const double rate = static_cast<double>(res.accepted) / static_cast<double>(res.attempts);
  const double se = std::sqrt(p2 * (1.0 - p2) / static_cast<double>(res.attempts));
  CHECK(std::abs(rate - p2) <= 3.0 * se + stein_chen_bound(n, alpha));

  std::vector<double> oracle(100000);
  RandomStream os = parent.derive(1);
  for (auto& v : oracle) {
    const double g1 = sample_gumbel(os), g2 = sample_gumbel(os), g12 = sample_gumbel(os);
    v = g1 + g2 - g12;
  }
  CHECK(ks_two_sample(EmpiricalDistribution(res.recentered),
                      EmpiricalDistribution(std::move(oracle))) <= 0.12);

  CHECK_THROWS_AS(conditional_slow_experiment(parent.derive(2), 100, 0.5, 1, 10),
                  std::invalid_argument);
  // A conditioning event that never happens exhausts the budget.
  CHECK_THROWS_AS(conditional_slow_experiment(parent.derive(3), 100, -6.0, 2, 5),
                  BudgetExceeded);
}
