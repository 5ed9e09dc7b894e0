#pragma once

// Distribution helpers shared by the correlation, regression, and causality
// code. Nothing here is data-aware; these are plain special functions.

namespace emdec::stats {

double log_gamma(double x);

// Regularized incomplete beta I_x(a, b) via the Lentz continued fraction.
double reg_inc_beta(double a, double b, double x);

// Two-tailed p-value of a Student-t statistic with df degrees of freedom.
double student_t_two_tailed_p(double t, double df);

double normal_cdf(double z);

// Two-tailed p-value of a standard-normal statistic.
double normal_two_tailed_p(double z);

// Upper tail P(X > x) of a chi-squared variable with k degrees of freedom.
double chi_squared_sf(double x, double k);

// Upper tail P(F > x) of an F(d1, d2) variable.
double f_sf(double x, double d1, double d2);

// Upper-tail critical value: f_sf(result, d1, d2) == alpha. Bisection.
double f_critical(double alpha, double d1, double d2);

// Regularized lower incomplete gamma P(a, x).
double reg_lower_gamma(double a, double x);

}  // namespace emdec::stats
