#include "fpp/mean_field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace fpp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

enum class SettleAction { Continue, StopAfter, StopBefore };

// Dense Dijkstra over the implicit complete graph. Each step fuses the relax
// pass from the last settled vertex with the min scan over the pending set.
// `on_candidate` sees the next vertex to settle and decides whether it is
// settled and whether the run continues (time stops abort before settling).
template <class WeightFn, class Candidate>
SmallestWeightTree sssp_core(WeightFn weight, std::uint32_t n, std::uint32_t source,
                             Candidate on_candidate) {
  SmallestWeightTree tree;
  tree.source = source;
  tree.dist.assign(n, kInf);
  tree.parent.assign(n, -1);
  tree.hops.assign(n, 0);
  tree.dist[source] = 0.0;

  std::vector<std::uint32_t> pending;
  pending.reserve(n - 1);
  for (std::uint32_t v = 0; v < n; ++v)
    if (v != source) pending.push_back(v);
  std::vector<double> tent(n, kInf);

  std::uint32_t cur = source;
  while (!pending.empty()) {
    const double cur_dist = tree.dist[cur];
    std::size_t best = 0;
    double best_d = kInf;
    for (std::size_t idx = 0; idx < pending.size(); ++idx) {
      const std::uint32_t v = pending[idx];
      const double nd = cur_dist + weight(cur, v);
      if (nd < tent[v]) {
        tent[v] = nd;
        tree.parent[v] = cur;
      }
      if (tent[v] < best_d) {
        best_d = tent[v];
        best = idx;
      }
    }
    const std::uint32_t v = pending[best];
    const SettleAction action = on_candidate(best_d, v);
    if (action == SettleAction::StopBefore) break;
    tree.dist[v] = best_d;
    tree.hops[v] = tree.hops[static_cast<std::uint32_t>(tree.parent[v])] + 1;
    pending[best] = pending.back();
    pending.pop_back();
    cur = v;
    if (action == SettleAction::StopAfter) break;
  }
  return tree;
}

// Dispatch to a raw-pointer weight function when the oracle is a table.
template <class Fn>
auto with_weight_fn(const EdgeWeightOracle& oracle, Fn&& fn) {
  if (const auto* t = dynamic_cast<const TableEdgeOracle*>(&oracle)) {
    const double* w = t->table().data();
    const std::uint32_t n = oracle.n();
    return fn([w, n](std::uint32_t i, std::uint32_t j) {
      return w[static_cast<std::size_t>(i) * n + j];
    });
  }
  return fn([&oracle](std::uint32_t i, std::uint32_t j) { return oracle.weight(i, j); });
}

void check_source(const EdgeWeightOracle& oracle, std::uint32_t source) {
  if (source >= oracle.n())
    throw std::out_of_range("smallest_weight_tree: source out of range");
}

// Materialization threshold: above this the n^2 table would dominate memory.
constexpr std::uint32_t kTableLimit = 4096;

}  // namespace

SmallestWeightTree smallest_weight_tree(const EdgeWeightOracle& oracle, std::uint32_t source) {
  check_source(oracle, source);
  return with_weight_fn(oracle, [&](auto weight) {
    return sssp_core(weight, oracle.n(), source,
                     [](double, std::uint32_t) { return SettleAction::Continue; });
  });
}

SmallestWeightTree tree_to_target(const EdgeWeightOracle& oracle, std::uint32_t source,
                                  std::uint32_t target) {
  check_source(oracle, source);
  if (target >= oracle.n() || target == source)
    throw std::out_of_range("tree_to_target: bad target");
  return with_weight_fn(oracle, [&](auto weight) {
    return sssp_core(weight, oracle.n(), source, [target](double, std::uint32_t v) {
      return v == target ? SettleAction::StopAfter : SettleAction::Continue;
    });
  });
}

SwgTrace swg_growth(const EdgeWeightOracle& oracle, std::uint32_t source, const SwgStop& stop) {
  check_source(oracle, source);
  const std::uint32_t n = oracle.n();
  if (stop.kind == SwgStop::Kind::Target) {
    if (stop.target.empty()) throw std::invalid_argument("swg_growth: empty target set");
    for (std::uint32_t v : stop.target)
      if (v >= n) throw std::out_of_range("swg_growth: target out of range");
  }

  SwgTrace trace;
  trace.source = source;
  trace.events.push_back({0.0, source});

  std::vector<char> is_target(stop.kind == SwgStop::Kind::Target ? n : 0, 0);
  for (std::uint32_t v : stop.target) is_target[v] = 1;
  if (stop.kind == SwgStop::Kind::Target && is_target[source]) {
    trace.stop_reason = SwgStopReason::TargetHit;
    return trace;
  }
  if (stop.kind == SwgStop::Kind::Size && stop.size <= 1) {
    trace.stop_reason = SwgStopReason::SizeReached;
    return trace;
  }

  with_weight_fn(oracle, [&](auto weight) {
    return sssp_core(weight, n, source, [&](double t, std::uint32_t v) {
      if (stop.kind == SwgStop::Kind::Time && t > stop.time) {
        trace.stop_reason = SwgStopReason::TimeReached;
        return SettleAction::StopBefore;
      }
      trace.events.push_back({t, v});
      if (stop.kind == SwgStop::Kind::Size && trace.events.size() >= stop.size) {
        trace.stop_reason = SwgStopReason::SizeReached;
        return SettleAction::StopAfter;
      }
      if (stop.kind == SwgStop::Kind::Target && is_target[v]) {
        trace.stop_reason = SwgStopReason::TargetHit;
        return SettleAction::StopAfter;
      }
      return SettleAction::Continue;
    });
  });
  if (stop.kind == SwgStop::Kind::Time) trace.stop_reason = SwgStopReason::TimeReached;
  if (stop.kind == SwgStop::Kind::Size && trace.events.size() == n)
    trace.stop_reason = SwgStopReason::SizeReached;
  return trace;
}

double flooding(const EdgeWeightOracle& oracle, std::uint32_t source) {
  const SmallestWeightTree tree = smallest_weight_tree(oracle, source);
  return *std::max_element(tree.dist.begin(), tree.dist.end());
}

namespace {

// Max over sources in `sources` of the distance to vertices in `targets`
// (or to everything when targets is empty), over a materialized table.
DiameterResult diameter_over_sources(const EdgeWeightOracle& oracle,
                                     const std::vector<std::uint32_t>& sources,
                                     const std::vector<std::uint32_t>& targets,
                                     DiameterMode mode) {
  const std::uint32_t n = oracle.n();
  const TableEdgeOracle* table = dynamic_cast<const TableEdgeOracle*>(&oracle);
  TableEdgeOracle local(2, 1.0);
  if (table == nullptr && n <= kTableLimit) {
    local = TableEdgeOracle::materialize(oracle);
    table = &local;
  }
  const EdgeWeightOracle& src = table != nullptr ? *table : oracle;

  DiameterResult res;
  res.mode = mode;
  res.sources_explored = static_cast<std::uint32_t>(sources.size());
  res.value = -kInf;
  for (std::uint32_t s : sources) {
    const SmallestWeightTree tree = smallest_weight_tree(src, s);
    if (targets.empty()) {
      for (std::uint32_t v = 0; v < n; ++v) {
        if (tree.dist[v] > res.value) {
          res.value = tree.dist[v];
          res.endpoints = {s, v};
        }
      }
    } else {
      for (std::uint32_t v : targets) {
        if (v != s && tree.dist[v] > res.value) {
          res.value = tree.dist[v];
          res.endpoints = {s, v};
        }
      }
    }
  }
  return res;
}

}  // namespace

DiameterResult diameter_exact(const EdgeWeightOracle& oracle, std::uint32_t budget) {
  const std::uint32_t n = oracle.n();
  if (n > budget) throw BudgetExceeded("diameter_exact: n exceeds the exact-mode budget");
  std::vector<std::uint32_t> sources(n);
  std::iota(sources.begin(), sources.end(), 0u);
  return diameter_over_sources(oracle, sources, {}, DiameterMode::Exact);
}

DiameterResult diameter_candidate(const EdgeWeightOracle& oracle, std::uint32_t k_candidates) {
  const std::uint32_t n = oracle.n();
  if (k_candidates < 2) throw std::invalid_argument("diameter_candidate: need k >= 2");
  if (k_candidates > n) throw std::invalid_argument("diameter_candidate: k exceeds n");
  const MinEdgeProfile profile = min_edge_profile(oracle);
  std::vector<std::uint32_t> cand(profile.order.begin(), profile.order.begin() + k_candidates);
  // Each candidate-source tree reaches every target, so only one endpoint of
  // the maximal pair needs to be a candidate.
  return diameter_over_sources(oracle, cand, {}, DiameterMode::Candidate);
}

std::uint32_t default_candidate_count(std::uint32_t n) {
  const auto k = static_cast<std::uint32_t>(std::ceil(4.0 * std::log(static_cast<double>(n))));
  return std::max(2u, std::min(k, n));
}

MinEdgeProfile min_edge_profile(const EdgeWeightOracle& oracle) {
  const std::uint32_t n = oracle.n();
  MinEdgeProfile profile;
  profile.x_min.assign(n, kInf);
  with_weight_fn(oracle, [&](auto weight) {
    for (std::uint32_t i = 0; i < n; ++i) {
      for (std::uint32_t j = i + 1; j < n; ++j) {
        const double w = weight(i, j);
        if (w < profile.x_min[i]) profile.x_min[i] = w;
        if (w < profile.x_min[j]) profile.x_min[j] = w;
      }
    }
    return 0;
  });
  profile.order.resize(n);
  std::iota(profile.order.begin(), profile.order.end(), 0u);
  std::sort(profile.order.begin(), profile.order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (profile.x_min[a] != profile.x_min[b]) return profile.x_min[a] > profile.x_min[b];
    return a < b;
  });
  return profile;
}

std::uint64_t count_slow(const MinEdgeProfile& profile, double alpha) {
  const double threshold = std::log(static_cast<double>(profile.x_min.size())) - alpha;
  std::uint64_t count = 0;
  for (double x : profile.x_min)
    if (x >= threshold) ++count;
  return count;
}

std::uint64_t count_bad_pairs(const AllPairsDistances& dist, const MinEdgeProfile& profile,
                              double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("count_bad_pairs: alpha must be positive");
  const std::uint32_t n = dist.n;
  if (profile.x_min.size() != n)
    throw std::invalid_argument("count_bad_pairs: profile/distances size mismatch");
  const double log_n = std::log(static_cast<double>(n));
  const double cap_i = log_n - alpha;
  const double cap_j = log_n + alpha / 2.0;
  const double d_min = 3.0 * log_n - alpha / 8.0;
  std::uint64_t count = 0;
  for (std::uint32_t i = 0; i < n; ++i) {
    if (profile.x_min[i] > cap_i) continue;
    for (std::uint32_t j = 0; j < n; ++j) {
      if (j == i || profile.x_min[j] > cap_j) continue;
      if (dist.at(i, j) >= d_min) ++count;
    }
  }
  return count;
}

AllPairsDistances all_pairs_distances(const EdgeWeightOracle& oracle) {
  const std::uint32_t n = oracle.n();
  if (n > kTableLimit) throw BudgetExceeded("all_pairs_distances: n exceeds the table budget");
  const TableEdgeOracle table = TableEdgeOracle::materialize(oracle);
  AllPairsDistances out;
  out.n = n;
  out.d.resize(static_cast<std::size_t>(n) * n);
  for (std::uint32_t s = 0; s < n; ++s) {
    const SmallestWeightTree tree = smallest_weight_tree(table, s);
    std::copy(tree.dist.begin(), tree.dist.end(), out.d.begin() + static_cast<std::size_t>(s) * n);
  }
  return out;
}

HopcountStats hopcount_stats(const SmallestWeightTree& tree, RandomStream& stream) {
  const auto n = static_cast<std::uint32_t>(tree.dist.size());
  auto idx = static_cast<std::uint32_t>(stream.next_uniform() * (n - 1));
  if (idx > n - 2) idx = n - 2;
  const std::uint32_t target = idx >= tree.source ? idx + 1 : idx;
  HopcountStats stats;
  stats.typical_hop = tree.hops[target];
  stats.max_hop = tree_height(tree);
  return stats;
}

std::uint32_t tree_height(const SmallestWeightTree& tree) {
  return *std::max_element(tree.hops.begin(), tree.hops.end());
}

std::uint32_t max_hopcount(const std::vector<SmallestWeightTree>& trees) {
  std::uint32_t best = 0;
  for (const auto& t : trees) best = std::max(best, tree_height(t));
  return best;
}

double max_hopcount_constant() {
  double x = 3.5;  // f(x) = x log x - x - 1, f' = log x
  for (int i = 0; i < 60; ++i) {
    const double f = x * std::log(x) - x - 1.0;
    const double step = f / std::log(x);
    x -= step;
    if (std::abs(step) < 1e-14) break;
  }
  return x;
}

namespace {

// Pairwise distances among tagged vertices, one early-stopped tree per
// tagged source. Also reports whether a third tagged vertex sits on a tagged
// pair's geodesic.
void tagged_pair_distances(const EdgeWeightOracle& oracle,
                           const std::vector<std::uint32_t>& tagged,
                           std::vector<double>* out, bool* interior_hit) {
  const std::uint32_t n = oracle.n();
  const std::size_t m = tagged.size();
  std::vector<char> is_tagged(n, 0);
  for (std::uint32_t v : tagged) is_tagged[v] = 1;
  if (interior_hit != nullptr) *interior_hit = false;

  for (std::size_t a = 0; a + 1 < m; ++a) {
    std::uint32_t remaining = 0;
    for (std::size_t b = a + 1; b < m; ++b) ++remaining;
    const std::uint32_t want = remaining;
    std::uint32_t seen = 0;
    const SmallestWeightTree tree = with_weight_fn(oracle, [&](auto weight) {
      return sssp_core(weight, n, tagged[a], [&](double, std::uint32_t v) {
        bool is_later = false;
        for (std::size_t b = a + 1; b < m; ++b) is_later |= (v == tagged[b]);
        if (is_later && ++seen == want) return SettleAction::StopAfter;
        return SettleAction::Continue;
      });
    });
    for (std::size_t b = a + 1; b < m; ++b) {
      out->push_back(tree.dist[tagged[b]]);
      if (interior_hit != nullptr) {
        auto v = static_cast<std::uint32_t>(tree.parent[tagged[b]]);
        while (v != tagged[a]) {
          if (is_tagged[v]) *interior_hit = true;
          v = static_cast<std::uint32_t>(tree.parent[v]);
        }
      }
    }
  }
}

}  // namespace

JointDistanceResult joint_distance_experiment(const EdgeWeightOracle& oracle, std::uint32_t m) {
  const std::uint32_t n = oracle.n();
  if (m < 2 || m > n) throw std::invalid_argument("joint_distance_experiment: need 2 <= m <= n");
  std::vector<std::uint32_t> tagged(m);
  std::iota(tagged.begin(), tagged.end(), 0u);

  JointDistanceResult res;
  res.recentered.reserve(static_cast<std::size_t>(m) * (m - 1) / 2);
  const double log_n = std::log(static_cast<double>(n));

  auto run = [&](const EdgeWeightOracle& o) {
    tagged_pair_distances(o, tagged, &res.recentered, &res.interior_hit);
  };
  if (n <= kTableLimit && dynamic_cast<const TableEdgeOracle*>(&oracle) == nullptr && m > 2) {
    run(TableEdgeOracle::materialize(oracle));
  } else {
    run(oracle);
  }
  for (double& d : res.recentered) d -= log_n;
  return res;
}

ConditionalSlowResult conditional_slow_experiment(const RandomStream& stream, std::uint32_t n,
                                                 double alpha, std::uint32_t m,
                                                 std::uint64_t budget) {
  if (m < 2) throw std::invalid_argument("conditional_slow_experiment: need m >= 2");
  if (n > kTableLimit)
    throw BudgetExceeded("conditional_slow_experiment: n exceeds the table budget");
  ConditionalSlowResult res;
  const double shift = 3.0 * std::log(static_cast<double>(n)) - 2.0 * alpha;
  for (std::uint64_t attempt = 0; attempt < budget; ++attempt) {
    ++res.attempts;
    RandomStream sub = stream.derive(attempt);
    const HashedEdgeOracle lazy(n, sub);
    const TableEdgeOracle table = TableEdgeOracle::materialize(lazy);
    const MinEdgeProfile profile = min_edge_profile(table);
    if (count_slow(profile, alpha) != m) continue;
    ++res.accepted;
    std::vector<std::uint32_t> slow(profile.order.begin(), profile.order.begin() + m);
    std::vector<double> dists;
    tagged_pair_distances(table, slow, &dists, nullptr);
    for (double d : dists) res.recentered.push_back(d - shift);
  }
  if (res.accepted == 0)
    throw BudgetExceeded("conditional_slow_experiment: budget exhausted with no acceptances");
  return res;
}

}  // namespace fpp
