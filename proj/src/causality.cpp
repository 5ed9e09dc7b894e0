#include "emdec/causality.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>

#include "emdec/errors.hpp"
#include "emdec/stats.hpp"

namespace emdec {

namespace {

// Design matrix rows [1, x_{t-1..t-p}, y_{t-1..t-p}] for t = start..n-1.
Eigen::MatrixXd lag_design(const std::vector<double>& x, const std::vector<double>& y, int p,
                           int start) {
  const int n = static_cast<int>(x.size());
  const int rows = n - start;
  Eigen::MatrixXd W(rows, 2 * p + 1);
  for (int t = start; t < n; ++t) {
    const int r = t - start;
    W(r, 0) = 1.0;
    for (int l = 1; l <= p; ++l) {
      W(r, l) = x[t - l];
      W(r, p + l) = y[t - l];
    }
  }
  return W;
}

struct EquationFit {
  Eigen::VectorXd coefs;
  Eigen::VectorXd resid;
  Eigen::MatrixXd cov;
};

EquationFit fit_equation(const Eigen::MatrixXd& W, const Eigen::VectorXd& v) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(W);
  qr.setThreshold(1e-10);
  if (qr.rank() < W.cols()) throw NumericError("VAR fit: collinear lag matrix");
  EquationFit f;
  f.coefs = qr.solve(v);
  f.resid = v - W * f.coefs;
  const int dof = static_cast<int>(W.rows() - W.cols());
  if (dof <= 0) throw DataError("VAR fit: no residual degrees of freedom");
  const double s2 = f.resid.squaredNorm() / dof;
  f.cov = s2 * (W.transpose() * W).inverse();
  return f;
}

VarModel fit_var_from(const std::vector<double>& x, const std::vector<double>& y, int p,
                      int start) {
  const int n = static_cast<int>(x.size());
  if (x.size() != y.size()) throw DataError("VAR fit: series lengths differ");
  if (p < 1) throw ConfigError("VAR lag order must be >= 1");
  if (n - start <= 2 * p + 1)
    throw DataError("VAR fit: " + std::to_string(n) + " observations are too few for p = " +
                    std::to_string(p));

  const Eigen::MatrixXd W = lag_design(x, y, p, start);
  const int rows = static_cast<int>(W.rows());
  Eigen::VectorXd vx(rows), vy(rows);
  for (int t = start; t < n; ++t) {
    vx(t - start) = x[t];
    vy(t - start) = y[t];
  }

  const EquationFit fits[2] = {fit_equation(W, vx), fit_equation(W, vy)};

  VarModel m;
  m.p = p;
  m.n_used = rows;
  m.lag_coefs.assign(p, Eigen::Matrix2d::Zero());
  for (int eq = 0; eq < 2; ++eq) {
    m.intercepts(eq) = fits[eq].coefs(0);
    for (int l = 1; l <= p; ++l) {
      m.lag_coefs[l - 1](eq, 0) = fits[eq].coefs(l);
      m.lag_coefs[l - 1](eq, 1) = fits[eq].coefs(p + l);
    }
    m.coef_cov[eq] = fits[eq].cov;
  }
  m.sigma(0, 0) = fits[0].resid.squaredNorm() / rows;
  m.sigma(1, 1) = fits[1].resid.squaredNorm() / rows;
  m.sigma(0, 1) = m.sigma(1, 0) = fits[0].resid.dot(fits[1].resid) / rows;
  return m;
}

}  // namespace

double companion_spectral_radius(const std::vector<Eigen::Matrix2d>& lag_coefs) {
  const int p = static_cast<int>(lag_coefs.size());
  if (p == 0) return 0.0;
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(2 * p, 2 * p);
  for (int l = 0; l < p; ++l) companion.block<2, 2>(0, 2 * l) = lag_coefs[l];
  if (p > 1) companion.block(2, 0, 2 * (p - 1), 2 * (p - 1)).setIdentity();
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(companion, false).eigenvalues();
  double radius = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) radius = std::max(radius, std::abs(ev(i)));
  return radius;
}

double VarModel::spectral_radius() const { return companion_spectral_radius(lag_coefs); }

VarModel fit_var(const std::vector<double>& x, const std::vector<double>& y, int p) {
  return fit_var_from(x, y, p, p);
}

int select_lag(const std::vector<double>& x, const std::vector<double>& y, int p_max) {
  if (p_max < 1) throw ConfigError("lag search needs p_max >= 1");
  const int n = static_cast<int>(x.size());
  const double t_eff = static_cast<double>(n - p_max);
  int best_p = 1;
  double best_aic = std::numeric_limits<double>::infinity();
  for (int p = 1; p <= p_max; ++p) {
    const VarModel m = fit_var_from(x, y, p, p_max);
    const double det = m.sigma.determinant();
    if (!(det > 0.0)) continue;  // degenerate fit; skip this order
    const double aic = std::log(det) + 2.0 * (4.0 * p + 2.0) / t_eff;
    if (aic < best_aic) {
      best_aic = aic;
      best_p = p;
    }
  }
  return best_p;
}

double bc_statistic(const VarModel& model, double omega, Direction dir) {
  const int p = model.p;
  if (p < 1 || static_cast<int>(model.lag_coefs.size()) != p)
    throw ConfigError("causality statistic needs a fitted VAR with p >= 1");
  if (!(omega > 0.0 && omega < std::numbers::pi))
    throw ConfigError("frequency must lie strictly inside (0, pi)");

  const int effect = dir == Direction::x_to_y ? 1 : 0;
  const int cause = dir == Direction::x_to_y ? 0 : 1;

  // cause-lag coefficients in the effect equation, and their covariance
  // block from the design order [const, x lags, y lags]
  Eigen::VectorXd theta(p);
  for (int l = 0; l < p; ++l) theta(l) = model.lag_coefs[l](effect, cause);
  const int offset = 1 + cause * p;
  if (model.coef_cov[effect].rows() < offset + p)
    throw ConfigError("causality statistic: model lacks coefficient covariance");
  const Eigen::MatrixXd V = model.coef_cov[effect].block(offset, offset, p, p);

  if (p == 1) {
    // one coefficient: the two restriction rows are proportional, testable
    // content is the single zero restriction
    const double v = V(0, 0);
    if (!(v > 0.0)) throw NumericError("causality statistic: singular coefficient variance");
    return theta(0) * theta(0) / v;
  }

  Eigen::MatrixXd R(2, p);
  for (int l = 1; l <= p; ++l) {
    R(0, l - 1) = std::cos(l * omega);
    R(1, l - 1) = std::sin(l * omega);
  }
  const Eigen::Vector2d rt = R * theta;
  const Eigen::Matrix2d rvr = R * V * R.transpose();
  const Eigen::Matrix2d inv = rvr.inverse();
  if (!inv.allFinite()) throw NumericError("causality statistic: singular restriction covariance");
  return rt.dot(inv * rt);
}

double omega_to_cycle(double omega) {
  if (!(omega > 0.0 && omega <= std::numbers::pi))
    throw ConfigError("cycle conversion needs omega in (0, pi]");
  return 2.0 * std::numbers::pi / omega;
}

CausalitySpectrum causality_spectrum(const std::vector<double>& x, const std::vector<double>& y,
                                     int p, Direction dir, const GridSpec& grid, TestForm form) {
  if (grid.points < 2) throw ConfigError("frequency grid needs at least 2 points");
  if (!(grid.lo_frac > 0.0 && grid.lo_frac < grid.hi_frac && grid.hi_frac < 1.0))
    throw ConfigError("frequency grid fractions must satisfy 0 < lo < hi < 1");

  const VarModel model = fit_var(x, y, p);

  CausalitySpectrum s;
  s.cause = dir == Direction::x_to_y ? "x" : "y";
  s.effect = dir == Direction::x_to_y ? "y" : "x";
  s.p = p;
  s.form = form;
  s.df = p == 1 ? 1 : 2;
  if (p == 1)
    s.notes.push_back(
        "lag order 1 leaves a single testable restriction; using 1 degree of freedom");

  const int dof = model.n_used - (2 * p + 1);
  if (form == TestForm::chi_squared) {
    s.critical = p == 1 ? 3.84 : 5.99;
  } else {
    s.critical = stats::f_critical(0.05, s.df, dof);
    s.notes.push_back("F form: statistic/" + std::to_string(s.df) + " against F(" +
                      std::to_string(s.df) + ", " + std::to_string(dof) + ")");
  }

  const double radius = model.spectral_radius();
  if (radius > 0.98) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "companion spectral radius %.3f: near-unit-root VAR", radius);
    s.notes.push_back(buf);
  }

  const double lo = grid.lo_frac * std::numbers::pi;
  const double hi = grid.hi_frac * std::numbers::pi;
  const double step = (hi - lo) / (grid.points - 1);
  s.omegas.resize(grid.points);
  s.statistics.resize(grid.points);
  for (int i = 0; i < grid.points; ++i) {
    const double w = lo + step * i;
    double stat = bc_statistic(model, w, dir);
    if (form == TestForm::f_test) stat /= s.df;
    s.omegas[i] = w;
    s.statistics[i] = stat;
  }

  // maximal grid runs above the critical value
  int run_start = -1;
  for (int i = 0; i <= grid.points; ++i) {
    const bool sig = i < grid.points && s.statistics[i] > s.critical;
    if (sig && run_start < 0) run_start = i;
    if (!sig && run_start >= 0) {
      s.significant_bands.push_back({s.omegas[run_start], s.omegas[i - 1]});
      run_start = -1;
    }
  }
  for (const FrequencyBand& b : s.significant_bands)
    s.cycle_bands.push_back({omega_to_cycle(b.hi), omega_to_cycle(b.lo)});
  return s;
}

}  // namespace emdec
