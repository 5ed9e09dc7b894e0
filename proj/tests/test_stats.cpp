#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <emdec/stats.hpp>

#include <cmath>
#include <limits>

using namespace emdec::stats;

TEST_CASE("log gamma matches factorials") {
  CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(log_gamma(2.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-12));
  CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-12));
}

TEST_CASE("regularized incomplete beta endpoints and symmetry") {
  CHECK(reg_inc_beta(2.0, 3.0, 0.0) == 0.0);
  CHECK(reg_inc_beta(2.0, 3.0, 1.0) == 1.0);
  CHECK(reg_inc_beta(0.5, 0.5, 0.5) == doctest::Approx(0.5).epsilon(1e-10));
  // I_x(a,b) = 1 - I_{1-x}(b,a)
  const double lhs = reg_inc_beta(2.5, 4.0, 0.3);
  const double rhs = 1.0 - reg_inc_beta(4.0, 2.5, 0.7);
  CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
  // I_x(1,1) = x for the uniform case
  CHECK(reg_inc_beta(1.0, 1.0, 0.42) == doctest::Approx(0.42).epsilon(1e-12));
}

TEST_CASE("student-t two-tailed p-values hit tabulated critical points") {
  // Classical 5% two-tailed critical values.
  CHECK(student_t_two_tailed_p(12.706, 1.0) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(student_t_two_tailed_p(2.228, 10.0) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(student_t_two_tailed_p(1.96, 1e7) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(student_t_two_tailed_p(0.0, 7.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(student_t_two_tailed_p(-2.228, 10.0) ==
        doctest::Approx(student_t_two_tailed_p(2.228, 10.0)).epsilon(1e-12));
  CHECK(student_t_two_tailed_p(std::numeric_limits<double>::infinity(), 5.0) == 0.0);
}

TEST_CASE("t distribution with one degree of freedom is cauchy") {
  // P(|T| > 1) = 1/2 exactly for Cauchy.
  CHECK(student_t_two_tailed_p(1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("normal cdf fixed points") {
  CHECK(normal_cdf(0.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(normal_cdf(1.959963984540054) == doctest::Approx(0.975).epsilon(1e-9));
  CHECK(normal_cdf(-1.959963984540054) == doctest::Approx(0.025).epsilon(1e-7));
  CHECK(normal_two_tailed_p(1.959963984540054) == doctest::Approx(0.05).epsilon(1e-7));
  CHECK(normal_cdf(10.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("chi-squared upper tail has a closed form at two degrees of freedom") {
  // k = 2: P(X > x) = exp(-x/2) exactly.
  for (double x : {0.5, 2.0, 5.991464547107979, 12.0})
    CHECK(chi_squared_sf(x, 2.0) == doctest::Approx(std::exp(-x / 2.0)).epsilon(1e-10));
  CHECK(chi_squared_sf(5.991464547107979, 2.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_squared_sf(3.841458820694124, 1.0) == doctest::Approx(0.05).epsilon(1e-9));
  CHECK(chi_squared_sf(0.0, 4.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("regularized lower gamma endpoints and exponential case") {
  CHECK(reg_lower_gamma(1.0, 0.0) == doctest::Approx(0.0).epsilon(1e-12));
  // a = 1: P(1, x) = 1 - exp(-x).
  CHECK(reg_lower_gamma(1.0, 2.0) == doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(reg_lower_gamma(3.5, 50.0) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("f distribution tail and critical value are mutually inverse") {
  for (double d1 : {1.0, 2.0, 5.0}) {
    for (double d2 : {10.0, 50.0, 200.0}) {
      const double crit = f_critical(0.05, d1, d2);
      CHECK(crit > 0.0);
      CHECK(f_sf(crit, d1, d2) == doctest::Approx(0.05).epsilon(1e-6));
    }
  }
  // F(1, n) is a squared t(n): 5% critical of F(1,10) = 2.228^2.
  CHECK(f_critical(0.05, 1.0, 10.0) == doctest::Approx(2.228 * 2.228).epsilon(1e-3));
  // Large d2: F(2, inf) at 5% approaches chi2(2)/2 = 2.9957.
  CHECK(f_critical(0.05, 2.0, 1e6) == doctest::Approx(5.991464547107979 / 2.0).epsilon(1e-3));
}

TEST_CASE("f tail is monotone in the statistic") {
  double prev = 1.0;
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) {
    const double p = f_sf(x, 3.0, 20.0);
    CHECK(p < prev);
    prev = p;
  }
}
