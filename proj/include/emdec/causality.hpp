#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <vector>

namespace emdec {

// Bivariate VAR(p). Variable 0 is x, variable 1 is y. lag_coefs[l](i, j) is
// the coefficient of variable j's lag (l+1) in variable i's equation. Each
// equation's coefficient covariance follows the design order
// [const, x lags 1..p, y lags 1..p].
struct VarModel {
  int p = 0;
  Eigen::Vector2d intercepts = Eigen::Vector2d::Zero();
  std::vector<Eigen::Matrix2d> lag_coefs;
  Eigen::Matrix2d sigma = Eigen::Matrix2d::Identity();
  std::array<Eigen::MatrixXd, 2> coef_cov;
  int n_used = 0;  // usable rows after lag trimming

  // Largest eigenvalue modulus of the companion matrix; < 1 for a
  // stationary process.
  double spectral_radius() const;
};

// Equation-by-equation least squares with intercepts; residual covariance
// divided by the usable row count.
VarModel fit_var(const std::vector<double>& x, const std::vector<double>& y, int p);

// Smallest AIC over p = 1..p_max, all fits on the common sample trimmed at
// p_max so the criterion compares like with like.
int select_lag(const std::vector<double>& x, const std::vector<double>& y, int p_max);

enum class Direction { x_to_y, y_to_x };

// Wald statistic for the frequency-specific no-causality restriction at
// angular frequency w in (0, pi): the cause's lag coefficients in the
// effect's equation must satisfy sum_l c_l cos(l w) = 0 and
// sum_l c_l sin(l w) = 0. At p = 1 the restriction collapses to the single
// coefficient being zero (rank 1).
double bc_statistic(const VarModel& model, double omega, Direction dir);

enum class TestForm { chi_squared, f_test };

struct FrequencyBand {
  double lo = 0.0;
  double hi = 0.0;
};

struct GridSpec {
  int points = 99;
  double lo_frac = 0.01;  // grid spans [lo_frac*pi, hi_frac*pi]
  double hi_frac = 0.99;
};

struct CausalitySpectrum {
  std::string cause;
  std::string effect;
  int p = 0;
  int df = 2;
  TestForm form = TestForm::chi_squared;
  double critical = 0.0;
  std::vector<double> omegas;
  std::vector<double> statistics;
  std::vector<FrequencyBand> significant_bands;  // omega intervals, statistic > critical
  std::vector<FrequencyBand> cycle_bands;        // the same intervals in periods, ascending
  std::vector<std::string> notes;
};

// Fits the VAR and traces the test statistic across the frequency grid.
// In the chi-squared form the critical value is 5.99 (two restrictions);
// with p = 1 only one restriction is testable and 3.84 applies, noted in
// the output. The F form rescales the statistic by the restriction count
// and draws the critical value from F(df, n_used - 2p - 1).
CausalitySpectrum causality_spectrum(const std::vector<double>& x, const std::vector<double>& y,
                                     int p, Direction dir, const GridSpec& grid = {},
                                     TestForm form = TestForm::chi_squared);

// Cycle length in observation periods: T = 2*pi / omega, for omega in (0, pi].
double omega_to_cycle(double omega);

double companion_spectral_radius(const std::vector<Eigen::Matrix2d>& lag_coefs);

}  // namespace emdec
