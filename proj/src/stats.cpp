#include "fpp/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpp {

EmpiricalDistribution::EmpiricalDistribution(std::vector<double> samples)
    : samples_(std::move(samples)) {
  if (samples_.empty())
    throw std::invalid_argument("EmpiricalDistribution: need at least one sample");
  std::sort(samples_.begin(), samples_.end());
}

double EmpiricalDistribution::mean() const {
  double s = 0.0;
  for (double x : samples_) s += x;
  return s / static_cast<double>(samples_.size());
}

double EmpiricalDistribution::variance() const {
  if (samples_.size() < 2) return 0.0;
  const double m = mean();
  double s = 0.0;
  for (double x : samples_) s += (x - m) * (x - m);
  return s / static_cast<double>(samples_.size() - 1);
}

double EmpiricalDistribution::cdf(double x) const {
  const auto it = std::upper_bound(samples_.begin(), samples_.end(), x);
  return static_cast<double>(it - samples_.begin()) / static_cast<double>(samples_.size());
}

double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b) {
  const auto& xs = a.samples();
  const auto& ys = b.samples();
  const double na = static_cast<double>(xs.size());
  const double nb = static_cast<double>(ys.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < xs.size() && j < ys.size()) {
    const double x = std::min(xs[i], ys[j]);
    while (i < xs.size() && xs[i] <= x) ++i;
    while (j < ys.size() && ys[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_against_cdf(const EmpiricalDistribution& a,
                      const std::function<double(double)>& cdf) {
  const auto& xs = a.samples();
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  double prev_f = -1.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    if (f < prev_f - 1e-12)
      throw std::invalid_argument("ks_against_cdf: cdf decreases on sample points");
    prev_f = f;
    d = std::max(d, f - static_cast<double>(i) / n);
    d = std::max(d, static_cast<double>(i + 1) / n - f);
  }
  return std::min(d, 1.0);
}

double tv_integer(const IntegerHistogram& h,
                  const std::function<double(std::int64_t)>& pmf) {
  if (h.total == 0) throw std::invalid_argument("tv_integer: empty histogram");
  // Queried support: observed keys plus 0..K until cumulative pmf mass
  // reaches 1 - 1e-12 (capped defensively).
  std::map<std::int64_t, double> p;
  double mass = 0.0;
  auto query = [&](std::int64_t k) {
    if (p.count(k)) return;
    const double v = pmf(k);
    if (v < 0.0) throw std::invalid_argument("tv_integer: negative pmf value");
    p[k] = v;
    mass += v;
  };
  for (const auto& [k, c] : h.counts) query(k);
  for (std::int64_t k = 0; k <= 1000000 && mass < 1.0 - 1e-12; ++k) query(k);
  if (mass > 1.0 + 1e-9) throw std::invalid_argument("tv_integer: pmf mass exceeds 1");

  double tv = 0.0;
  for (const auto& [k, pk] : p) {
    const auto it = h.counts.find(k);
    const double emp =
        it == h.counts.end() ? 0.0
                             : static_cast<double>(it->second) / static_cast<double>(h.total);
    tv += std::abs(emp - pk);
  }
  tv += std::max(0.0, 1.0 - mass);  // unqueried pmf tail
  return std::min(1.0, 0.5 * tv);
}

std::pair<double, double> bootstrap_ci(const EmpiricalDistribution& a,
                                       const std::function<double(const std::vector<double>&)>& statistic,
                                       double level, std::uint32_t resamples,
                                       RandomStream stream) {
  if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("bootstrap_ci: level in (0,1)");
  if (resamples < 100) throw std::invalid_argument("bootstrap_ci: need >= 100 resamples");
  const auto& xs = a.samples();
  const std::size_t n = xs.size();
  std::vector<double> stats(resamples);
  std::vector<double> buf(n);
  for (std::uint32_t r = 0; r < resamples; ++r) {
    for (std::size_t i = 0; i < n; ++i) {
      const auto idx = static_cast<std::size_t>(stream.next_uniform() * static_cast<double>(n));
      buf[i] = xs[idx < n ? idx : n - 1];
    }
    stats[r] = statistic(buf);
  }
  std::sort(stats.begin(), stats.end());
  const double tail = (1.0 - level) / 2.0;
  auto pick = [&](double q) {
    auto idx = static_cast<std::size_t>(q * static_cast<double>(resamples - 1) + 0.5);
    return stats[std::min(idx, static_cast<std::size_t>(resamples - 1))];
  };
  return {pick(tail), pick(1.0 - tail)};
}

double gumbel_cdf(double x) { return std::exp(-std::exp(-x)); }

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double poisson_pmf(std::int64_t k, double mean) {
  if (mean < 0.0) throw std::invalid_argument("poisson_pmf: negative mean");
  if (k < 0) return 0.0;
  if (mean == 0.0) return k == 0 ? 1.0 : 0.0;
  const double kk = static_cast<double>(k);
  return std::exp(kk * std::log(mean) - mean - std::lgamma(kk + 1.0));
}

namespace {

// Regularized lower incomplete gamma by series; valid for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::abs(del) < std::abs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma by continued fraction; for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 1e-15) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_q: bad arguments");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

double chi_square_gof_pvalue(const IntegerHistogram& h,
                             const std::function<double(std::int64_t)>& pmf) {
  if (h.total == 0) throw std::invalid_argument("chi_square_gof: empty histogram");
  const double n = static_cast<double>(h.total);
  const std::int64_t lo = h.counts.begin()->first;
  const std::int64_t hi = h.counts.rbegin()->first;

  // Cells over [lo, hi] with open tails; pool until each cell expects >= 5.
  std::vector<double> obs, exp;
  double o_acc = 0.0, e_acc = 0.0;
  double mass_seen = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    const auto it = h.counts.find(k);
    o_acc += it == h.counts.end() ? 0.0 : static_cast<double>(it->second);
    const double pk = pmf(k);
    mass_seen += pk;
    e_acc += n * pk;
    if (e_acc >= 5.0) {
      obs.push_back(o_acc);
      exp.push_back(e_acc);
      o_acc = e_acc = 0.0;
    }
  }
  // Remaining pmf mass (below lo and above hi) joins the last pooled cell.
  e_acc += n * std::max(0.0, 1.0 - mass_seen);
  if (obs.empty()) {
    obs.push_back(o_acc);
    exp.push_back(e_acc);
  } else {
    obs.back() += o_acc;
    exp.back() += e_acc;
  }
  if (obs.size() < 2) return 1.0;
  double stat = 0.0;
  for (std::size_t i = 0; i < obs.size(); ++i)
    stat += (obs[i] - exp[i]) * (obs[i] - exp[i]) / exp[i];
  const double dof = static_cast<double>(obs.size() - 1);
  return gamma_q(dof / 2.0, stat / 2.0);
}

}  // namespace fpp
