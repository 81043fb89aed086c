#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fpp/limit_lab.hpp"
#include "fpp/random.hpp"
#include "fpp/stats.hpp"

using namespace fpp;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

TEST_CASE("pair array indexing matches the fill order") {
  DArray d;
  d.m = 4;
  d.entries = {0, 1, 2, 3, 4, 5};
  CHECK(d.index(0, 1) == 0);
  CHECK(d.index(0, 2) == 1);
  CHECK(d.index(0, 3) == 2);
  CHECK(d.index(1, 2) == 3);
  CHECK(d.index(1, 3) == 4);
  CHECK(d.index(2, 3) == 5);
  CHECK(d.at(1, 3) == 4.0);
  CHECK_THROWS_AS(d.index(2, 2), std::out_of_range);
  CHECK_THROWS_AS(d.index(1, 4), std::out_of_range);

  // Fill order agreement on a live sample: entry (a,b) uses vertex values a,b.
  RandomStream stub = RandomStream::stub(std::vector<double>(9, std::exp(-1.0)));
  const DArray z = sample_d_array(stub, 3);
  REQUIRE(z.entries.size() == 3);
  for (double e : z.entries) CHECK(e == 0.0);  // all Gumbels are exactly 0
}

TEST_CASE("pair array sampler: validation and self-consistency at the median scale") {
  RandomStream s(40);
  CHECK_THROWS_AS(sample_d_array(s, 1), std::invalid_argument);

  // CDF of an entry at 0 is the same whether estimated from 1e5 or 4e5 draws.
  const RandomStream parent(41);
  auto cdf_at_zero = [&parent](std::uint64_t salt, int reps) {
    RandomStream sub = parent.derive(salt);
    int below = 0;
    for (int r = 0; r < reps; ++r)
      if (sample_d_array(sub, 2).entries[0] <= 0.0) ++below;
    return static_cast<double>(below) / reps;
  };
  const double p1 = cdf_at_zero(0, 100000);
  const double p2 = cdf_at_zero(1, 400000);
  const double se = std::sqrt(p1 * (1.0 - p1) * (1.0 / 100000 + 1.0 / 400000));
  CHECK(std::abs(p1 - p2) <= 3.5 * se);
}

TEST_CASE("pair array: shared-vertex entries correlate, disjoint ones do not") {
  const RandomStream parent(42);
  const int reps = 100000;
  std::vector<double> e01(reps), e02(reps), e23(reps);
  RandomStream sub = parent.derive(0);
  for (int r = 0; r < reps; ++r) {
    const DArray d = sample_d_array(sub, 4);
    e01[static_cast<std::size_t>(r)] = d.at(0, 1);
    e02[static_cast<std::size_t>(r)] = d.at(0, 2);
    e23[static_cast<std::size_t>(r)] = d.at(2, 3);
  }
  auto corr = [reps](const std::vector<double>& x, const std::vector<double>& y) {
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
  const double shared = corr(e01, e02);
  const double disjoint = corr(e01, e23);
  const double se = 1.0 / std::sqrt(static_cast<double>(reps));
  CHECK(shared > 0.1);                  // theoretical value 1/3 of the Gumbel variances
  CHECK(std::abs(disjoint) <= 3.0 * se);
}

TEST_CASE("Poisson-count approximation: stub and empty-event probability") {
  // Mean e^0 = 1; three unit exponentials of 0.4 give N = 2, then
  // two vertex Gumbels and one pair Gumbel, all exactly 0.
  RandomStream stub = RandomStream::stub(
      {std::exp(-0.4), std::exp(-0.4), std::exp(-0.4), std::exp(-1.0), std::exp(-1.0),
       std::exp(-1.0)});
  CHECK(sample_xi_alpha(stub, 0.0) == 0.0);

  RandomStream few = RandomStream::stub({std::exp(-2.0)});
  CHECK(sample_xi_alpha(few, 0.0) == -kInf);

  const RandomStream parent(43);
  int degenerate = 0;
  for (int r = 0; r < 100000; ++r) {
    RandomStream s = parent.derive(static_cast<std::uint64_t>(r));
    if (sample_xi_alpha(s, 0.0) == -kInf) ++degenerate;
  }
  // P(Poisson(1) < 2) = 2/e.
  CHECK(static_cast<double>(degenerate) / 100000.0 ==
        doctest::Approx(2.0 * std::exp(-1.0)).epsilon(0.015));
}

TEST_CASE("maximiser core: hand case, stability flag, validation") {
  const std::vector<double> points{1.0, 0.5};
  const auto flat = [](std::uint32_t, std::uint32_t) { return 0.2; };

  const XiSample loose = xi_from_points(points, flat, 0.7, -kInf);
  CHECK(loose.value == doctest::Approx(1.3));
  CHECK(loose.argpair == std::pair<std::uint32_t, std::uint32_t>{0, 1});
  CHECK_FALSE(loose.stable);  // only one point sits above the inner floor
  CHECK_FALSE(loose.degenerate);

  const XiSample tight = xi_from_points(points, flat, 0.4, -kInf);
  CHECK(tight.value == doctest::Approx(1.3));
  CHECK(tight.stable);

  const XiSample single = xi_from_points({1.0}, flat, 0.0, -kInf);
  CHECK(single.degenerate);
  CHECK(single.value == -kInf);

  CHECK_THROWS_AS(xi_from_points({0.5, 1.0}, flat, 0.0, -kInf), std::invalid_argument);
  CHECK_THROWS_AS(xi_from_points({1.0, 1.0}, flat, 0.0, -kInf), std::invalid_argument);
}

TEST_CASE("maximiser cutoff never changes the result") {
  // The scan that skips pairs whose best possible value is already beaten
  // must agree exactly with the exhaustive scan whenever the claimed weight
  // floor is genuine.
  const RandomStream parent(44);
  const double weight_floor = -3.7;  // below the generator's exact minimum
  for (int cfg = 0; cfg < 200; ++cfg) {
    RandomStream sub = parent.derive(static_cast<std::uint64_t>(cfg));
    std::vector<double> pts(20);
    for (auto& p : pts) p = sample_gumbel(sub);
    std::sort(pts.begin(), pts.end(), std::greater<>());
    const RandomStream base = sub.derive(1);
    const auto weight = [&base](std::uint32_t s, std::uint32_t t) {
      RandomStream ps = base.derive((static_cast<std::uint64_t>(s) << 32) | t);
      return sample_gumbel(ps);
    };
    const XiSample fast = xi_from_points(pts, weight, 0.0, weight_floor);
    const XiSample full = xi_from_points(pts, weight, 0.0, -kInf);
    CHECK(fast.value == full.value);
    CHECK(fast.argpair == full.argpair);
    CHECK(fast.stable == full.stable);
  }
}

TEST_CASE("limit maximum: stability and outer-level monotonicity") {
  const RandomStream parent(45);
  int stable = 0;
  for (int r = 0; r < 10000; ++r) {
    RandomStream s = parent.derive(static_cast<std::uint64_t>(r));
    const XiSample xi = sample_xi(s, 1.0, 4.0, 4.0);
    CHECK(xi.inner_level == 4.0);
    CHECK(xi.outer_level == 8.0);
    if (xi.stable) ++stable;
  }
  CHECK(static_cast<double>(stable) / 10000.0 >= 0.99);

  // Enlarging the outer margin only adds candidate pairs, so the maximum can
  // only grow; the shared point prefix and pair weights are identical.
  for (int r = 0; r < 200; ++r) {
    RandomStream s1 = parent.derive(static_cast<std::uint64_t>(r) + (1ULL << 32));
    RandomStream s2 = s1;
    const XiSample narrow = sample_xi(s1, 1.0, 2.0, 1.0);
    const XiSample wide = sample_xi(s2, 1.0, 2.0, 3.0);
    if (narrow.degenerate) continue;
    CHECK(wide.value >= narrow.value);
  }

  RandomStream s(1);
  CHECK_THROWS_AS(sample_xi(s, 0.0, 4.0, 4.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_xi(s, 1.0, 4.0, 0.0), std::invalid_argument);
}

TEST_CASE("dual minimum sampler: stub trace and delta robustness") {
  // Unit exponentials all equal 1: partial sums 1,2,3; the first pair gives
  // q = 1*2/1 = 2, the bound passes only after the third sum arrives.
  RandomStream stub = RandomStream::stub(std::vector<double>(6, std::exp(-1.0)));
  CHECK(sample_q(stub, 0.6) == doctest::Approx(2.0));

  RandomStream s(2);
  CHECK_THROWS_AS(sample_q(s, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(sample_q(s, 1.0), std::invalid_argument);

  const RandomStream parent(46);
  int same = 0;
  for (int r = 0; r < 10000; ++r) {
    RandomStream a = parent.derive(static_cast<std::uint64_t>(r));
    RandomStream b = parent.derive(static_cast<std::uint64_t>(r));
    if (sample_q(a, 1e-3) == sample_q(b, 1e-6)) ++same;
  }
  // The loose run differs only when an unexamined pair actually wins, which
  // happens with probability below its delta.
  CHECK(static_cast<double>(same) / 10000.0 >= 0.998);
}

TEST_CASE("direct tail estimates are monotone and positive-valued") {
  const RandomStream parent(47);
  double prev = 1.1;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const TailEstimate est = tail_q_direct(parent, x, 4000, 1e-6);
    CHECK(est.method == TailMethod::Direct);
    CHECK(est.estimate <= prev);  // identical q draws, nested events
    prev = est.estimate;
  }
  CHECK(prev >= 0.0);
  CHECK_THROWS_AS(tail_q_direct(parent, -1.0, 100, 1e-6), std::invalid_argument);
}

TEST_CASE("product-formula tail: limits and cross-estimator agreement") {
  const RandomStream parent(48);
  const TailEstimate lo = tail_q_product(parent.derive(0), 1e-4, 1000000, 2000);
  CHECK(lo.estimate >= 0.99);
  const TailEstimate hi = tail_q_product(parent.derive(1), 100.0, 1000000, 2000);
  CHECK(hi.estimate <= 0.05);

  for (double x : {0.5, 1.0, 2.0}) {
    const TailEstimate direct = tail_q_direct(parent.derive(2), x, 10000, 1e-6);
    const TailEstimate prod = tail_q_product(parent.derive(3), x, 1000000, 10000);
    const double gap = std::abs(direct.estimate - prod.estimate);
    const double se = std::sqrt(direct.std_error * direct.std_error +
                                prod.std_error * prod.std_error);
    CHECK(gap <= 2.5 * se);
  }
  CHECK_THROWS_AS(tail_q_product(parent, 0.0, 100, 100), std::invalid_argument);
}

TEST_CASE("closed-form lower bound sits under both estimators") {
  CHECK(tail_q_lower_bound(0.001) == doctest::Approx(std::exp(-1.0)).epsilon(1e-9));
  CHECK(tail_q_lower_bound(0.02) <= std::exp(-1.0) + 1e-12);

  double prev = 1.0;
  for (double x : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    const double lb = tail_q_lower_bound(x);
    CHECK(lb > 0.0);
    CHECK(lb <= prev);
    prev = lb;
  }

  const RandomStream parent(49);
  for (double x : {0.5, 1.0, 2.0}) {
    const double lb = tail_q_lower_bound(x);
    const TailEstimate direct = tail_q_direct(parent.derive(5), x, 10000, 1e-6);
    const TailEstimate prod = tail_q_product(parent.derive(6), x, 1000000, 10000);
    CHECK(lb <= direct.estimate + 3.0 * direct.std_error);
    CHECK(lb <= prod.estimate + 3.0 * prod.std_error);
  }
  CHECK_THROWS_AS(tail_q_lower_bound(0.0), std::invalid_argument);
}

TEST_CASE("moment estimates tighten with replicates") {
  const RandomStream parent(50);
  const XiMoments small = estimate_xi_moments(parent.derive(0), 1000, 4.0, 4.0);
  const XiMoments large = estimate_xi_moments(parent.derive(1), 4000, 4.0, 4.0);
  CHECK(small.variance > 0.0);
  CHECK(small.mean_ci.first <= small.mean);
  CHECK(small.mean <= small.mean_ci.second);
  CHECK(small.variance_ci.first <= small.variance);
  CHECK(small.variance <= small.variance_ci.second);
  CHECK(small.stable_count + small.unstable_count == 1000);
  CHECK(large.stable_count + large.unstable_count == 4000);

  const double w_small = small.mean_ci.second - small.mean_ci.first;
  const double w_large = large.mean_ci.second - large.mean_ci.first;
  const double ratio = w_small / w_large;  // expect ~sqrt(4) = 2
  CHECK(ratio >= 1.6);
  CHECK(ratio <= 2.5);

  CHECK_THROWS_AS(estimate_xi_moments(parent.derive(2), 99, 4.0, 4.0), std::invalid_argument);
  // A truncation this shallow leaves most draws degenerate or unstable.
  CHECK_THROWS_AS(estimate_xi_moments(parent.derive(3), 500, 0.5, 0.5), std::runtime_error);
}
