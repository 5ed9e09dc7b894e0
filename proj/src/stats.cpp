#include "emdec/stats.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace emdec::stats {

namespace {

// Continued-fraction core for the incomplete beta (Lentz's method).
double beta_cf(double a, double b, double x) {
  constexpr int kMaxIter = 300;
  constexpr double kEps = 3e-14;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double log_gamma(double x) { return std::lgamma(x); }

double reg_inc_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("reg_inc_beta: a, b must be positive");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double ln_front =
      log_gamma(a + b) - log_gamma(a) - log_gamma(b) + a * std::log(x) + b * std::log(1.0 - x);
  const double front = std::exp(ln_front);
  // use the symmetry that converges fastest
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
  return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed_p(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("student_t_two_tailed_p: df must be positive");
  if (std::isinf(t)) return 0.0;
  if (std::isnan(t)) return std::numeric_limits<double>::quiet_NaN();
  const double x = df / (df + t * t);
  return reg_inc_beta(0.5 * df, 0.5, x);
}

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_two_tailed_p(double z) { return std::erfc(std::abs(z) / std::sqrt(2.0)); }

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::invalid_argument("reg_lower_gamma: a must be positive");
  if (x <= 0.0) return 0.0;
  if (x < a + 1.0) {
    // series expansion
    double sum = 1.0 / a;
    double term = sum;
    double ap = a;
    for (int n = 0; n < 500; ++n) {
      ap += 1.0;
      term *= x / ap;
      sum += term;
      if (std::abs(term) < std::abs(sum) * 3e-14) break;
    }
    return sum * std::exp(-x + a * std::log(x) - log_gamma(a));
  }
  // continued fraction for the upper tail, then complement
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < 3e-14) break;
  }
  const double q = std::exp(-x + a * std::log(x) - log_gamma(a)) * h;
  return 1.0 - q;
}

double chi_squared_sf(double x, double k) {
  if (x <= 0.0) return 1.0;
  return 1.0 - reg_lower_gamma(0.5 * k, 0.5 * x);
}

double f_sf(double x, double d1, double d2) {
  if (x <= 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  // P(F > x) = I_{d2/(d2 + d1 x)}(d2/2, d1/2)
  return reg_inc_beta(0.5 * d2, 0.5 * d1, d2 / (d2 + d1 * x));
}

double f_critical(double alpha, double d1, double d2) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("f_critical: alpha in (0,1)");
  double lo = 0.0, hi = 1.0;
  while (f_sf(hi, d1, d2) > alpha) {
    hi *= 2.0;
    if (hi > 1e12) break;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (f_sf(mid, d1, d2) > alpha)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-12 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

}  // namespace emdec::stats
