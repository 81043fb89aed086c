#pragma once

#include <cmath>
#include <functional>

namespace fpp {

// Tanh-sinh quadrature on (0,1). The integrand receives the node x together
// with an accurately computed 1-x, so integrable endpoint singularities keep
// full precision even where x itself rounds to 1. The step halves until two
// successive levels agree to rel_tol.
inline double tanh_sinh_01(const std::function<double(double, double)>& f, double rel_tol) {
  const double pi_half = 1.5707963267948966;
  const double t_max = 6.2;  // node weights underflow beyond this

  auto sum_at = [&](double h) {
    double s = 0.0;
    for (int k = static_cast<int>(-t_max / h); h * k <= t_max; ++k) {
      const double t = h * static_cast<double>(k);
      const double u = pi_half * std::sinh(t);
      // x = sigmoid(2u) and 1-x = sigmoid(-2u), each exact near its own zero.
      const double x = 1.0 / (1.0 + std::exp(-2.0 * u));
      const double omx = 1.0 / (1.0 + std::exp(2.0 * u));
      const double w = 0.5 * pi_half * std::cosh(t) / std::pow(std::cosh(u), 2);
      if (x > 0.0 && omx > 0.0 && w > 0.0) s += w * f(x, omx);
    }
    return h * s;
  };

  double h = 0.5;
  double prev = sum_at(h);
  for (int level = 0; level < 10; ++level) {
    h *= 0.5;
    const double cur = sum_at(h);
    if (std::abs(cur - prev) <= rel_tol * std::abs(cur)) return cur;
    prev = cur;
  }
  return prev;
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                                   double b, double fa, double fm, double fb,
                                   double whole, double tol, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

}  // namespace detail

// Adaptive Simpson on [a,b] to absolute tolerance tol.
inline double adaptive_simpson(const std::function<double(double)>& f, double a,
                               double b, double tol, int max_depth = 40) {
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

}  // namespace fpp
