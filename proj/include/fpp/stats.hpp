#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "fpp/random.hpp"

namespace fpp {

// Sorted sample container backing the KS/TV/bootstrap statistics.
class EmpiricalDistribution {
 public:
  explicit EmpiricalDistribution(std::vector<double> samples);

  const std::vector<double>& samples() const { return samples_; }
  std::size_t count() const { return samples_.size(); }

  double min() const { return samples_.front(); }
  double max() const { return samples_.back(); }
  double mean() const;
  double variance() const;  // unbiased

  // Right-continuous ECDF.
  double cdf(double x) const;

 private:
  std::vector<double> samples_;
};

struct IntegerHistogram {
  std::map<std::int64_t, std::uint64_t> counts;
  std::uint64_t total = 0;

  void add(std::int64_t k, std::uint64_t c = 1) {
    counts[k] += c;
    total += c;
  }
};

// Exact two-sample Kolmogorov-Smirnov statistic, sup-norm of the ECDF
// difference via a merge scan.
double ks_two_sample(const EmpiricalDistribution& a, const EmpiricalDistribution& b);

// One-sample KS statistic D = max_i max(F(x_i) - i/n, (i+1)/n - F(x_i)).
// Throws if the cdf decreases on the sample points.
double ks_against_cdf(const EmpiricalDistribution& a,
                      const std::function<double(double)>& cdf);

// Total variation distance between an integer histogram and a pmf. The pmf is
// queried on the observed support plus 0..K where K covers all but 1e-12 of
// its mass; the unqueried tail mass counts fully toward the distance.
double tv_integer(const IntegerHistogram& h,
                  const std::function<double(std::int64_t)>& pmf);

// Percentile bootstrap interval for the given statistic; deterministic given
// the stream.
std::pair<double, double> bootstrap_ci(const EmpiricalDistribution& a,
                                       const std::function<double(const std::vector<double>&)>& statistic,
                                       double level, std::uint32_t resamples,
                                       RandomStream stream);

// Reference distributions.
double gumbel_cdf(double x);
// Standard normal CDF via the C library erfc; absolute error well below 1e-7.
double normal_cdf(double x);
double poisson_pmf(std::int64_t k, double mean);

// Regularized upper incomplete gamma Q(a,x); used for chi-square p-values.
double gamma_q(double a, double x);

// Chi-square goodness-of-fit p-value for an integer histogram against a pmf,
// with cells of expected count < 5 pooled into the tails.
double chi_square_gof_pvalue(const IntegerHistogram& h,
                             const std::function<double(std::int64_t)>& pmf);

}  // namespace fpp
