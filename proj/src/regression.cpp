#include "emdec/regression.hpp"

#include <algorithm>
#include <cmath>

#include "emdec/errors.hpp"
#include "emdec/stats.hpp"

namespace emdec {

namespace {

Eigen::MatrixXd with_intercept(const Eigen::MatrixXd& X, bool intercept) {
  if (!intercept) return X;
  Eigen::MatrixXd D(X.rows(), X.cols() + 1);
  D.col(0).setOnes();
  D.rightCols(X.cols()) = X;
  return D;
}

std::vector<std::string> design_names(const std::vector<std::string>& names, Eigen::Index k,
                                      bool intercept) {
  std::vector<std::string> out;
  if (intercept) out.push_back("const");
  for (Eigen::Index j = 0; j < k; ++j) {
    if (j < static_cast<Eigen::Index>(names.size()))
      out.push_back(names[j]);
    else
      out.push_back("x" + std::to_string(j + 1));
  }
  return out;
}

// Solves D*b = y, reporting which column breaks the rank when D is singular.
Eigen::VectorXd solve_full_rank(const Eigen::MatrixXd& D, const Eigen::VectorXd& y,
                                const std::vector<std::string>& names, const char* what) {
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(D);
  qr.setThreshold(1e-10);
  if (qr.rank() < D.cols()) {
    const auto perm = qr.colsPermutation().indices();
    const Eigen::Index bad = perm[qr.rank()];
    const std::string label = bad < static_cast<Eigen::Index>(names.size())
                                  ? names[bad]
                                  : "column " + std::to_string(bad);
    throw NumericError(std::string(what) + ": design matrix is rank deficient at " + label);
  }
  return qr.solve(y);
}

// Shared tail of both estimators: given the covariance design C (whose
// Gram inverse scales the standard errors) and the residual vector, fill
// t-stats and p-values.
void fill_inference(RegressionResult& r, const Eigen::MatrixXd& C, const Eigen::VectorXd& resid) {
  const Eigen::Index n = C.rows();
  const Eigen::Index k = C.cols();
  r.n_obs = static_cast<int>(n);
  r.df_residual = static_cast<int>(n - k);
  if (r.df_residual <= 0) throw DataError("regression: no residual degrees of freedom");
  const double sigma2 = resid.squaredNorm() / r.df_residual;
  const Eigen::MatrixXd gram_inv = (C.transpose() * C).inverse();
  r.t_stats.resize(k);
  r.p_values.resize(k);
  for (Eigen::Index j = 0; j < k; ++j) {
    const double se = std::sqrt(sigma2 * gram_inv(j, j));
    const double t = se > 0.0 ? r.coefficients[j] / se
                              : std::numeric_limits<double>::infinity();
    r.t_stats[j] = t;
    r.p_values[j] = stats::student_t_two_tailed_p(t, r.df_residual);
  }
}

}  // namespace

InstrumentStrength classify_instrument_strength(double f) {
  InstrumentStrength s;
  s.cragg_donald_f = f;
  s.strong = f > kWeakInstrumentStrong;
  s.marginal = f > kWeakInstrumentMarginal;
  return s;
}

RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, bool intercept,
                     const std::vector<std::string>& names) {
  if (y.size() != X.rows()) throw DataError("ols: y and X row counts differ");
  const Eigen::MatrixXd D = with_intercept(X, intercept);
  if (y.size() <= D.cols())
    throw DataError("ols: need more than " + std::to_string(D.cols()) + " observations, got " +
                    std::to_string(y.size()));

  RegressionResult r;
  r.names = design_names(names, X.cols(), intercept);
  const Eigen::VectorXd b = solve_full_rank(D, y, r.names, "ols");
  r.coefficients.assign(b.data(), b.data() + b.size());

  const Eigen::VectorXd resid = y - D * b;
  fill_inference(r, D, resid);

  const double ssr = resid.squaredNorm();
  double sst;
  if (intercept) {
    const Eigen::VectorXd centered = y.array() - y.mean();
    sst = centered.squaredNorm();
  } else {
    sst = y.squaredNorm();
  }
  if (sst <= 0.0) throw DataError("ols: dependent variable is constant");
  r.r_squared = 1.0 - ssr / sst;
  return r;
}

Eigen::MatrixXd build_instruments(const Eigen::MatrixXd& X, int lags) {
  if (lags < 1) throw ConfigError("instrument lags must be >= 1");
  const Eigen::Index n = X.rows();
  if (n <= lags)
    throw DataError("instrument construction: " + std::to_string(lags) +
                    " lags leave no usable rows out of " + std::to_string(n));
  const Eigen::Index rows = n - lags;
  Eigen::MatrixXd Z(rows, X.cols() * lags);
  Eigen::Index col = 0;
  for (Eigen::Index j = 0; j < X.cols(); ++j)
    for (int l = 1; l <= lags; ++l) Z.col(col++) = X.col(j).segment(lags - l, rows);
  return Z;
}

RegressionResult two_sls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                         const std::vector<int>& endogenous_cols, const Eigen::MatrixXd& Z,
                         bool intercept, const std::vector<std::string>& names) {
  if (y.size() != X.rows()) throw DataError("2sls: y and X row counts differ");
  if (!endogenous_cols.empty() && Z.rows() != X.rows())
    throw DataError("2sls: instrument rows must match the regressor rows");
  for (int c : endogenous_cols)
    if (c < 0 || c >= X.cols()) throw ConfigError("2sls: endogenous column index out of range");
  if (static_cast<Eigen::Index>(endogenous_cols.size()) > Z.cols())
    throw DataError("2sls: under-identified (" + std::to_string(endogenous_cols.size()) +
                    " endogenous, " + std::to_string(Z.cols()) + " instruments)");

  std::vector<bool> is_endog(X.cols(), false);
  for (int c : endogenous_cols) is_endog[c] = true;

  RegressionResult r;
  r.names = design_names(names, X.cols(), intercept);

  Eigen::MatrixXd X_hat = X;
  if (!endogenous_cols.empty()) {
    Eigen::Index n_exog = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (!is_endog[j]) ++n_exog;
    Eigen::MatrixXd W(X.rows(), (intercept ? 1 : 0) + n_exog + Z.cols());
    Eigen::Index wc = 0;
    if (intercept) W.col(wc++).setOnes();
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (!is_endog[j]) W.col(wc++) = X.col(j);
    W.rightCols(Z.cols()) = Z;

    std::vector<std::string> w_names;
    for (Eigen::Index j = 0; j < W.cols(); ++j) w_names.push_back("instrument " + std::to_string(j));
    for (int c : endogenous_cols) {
      const Eigen::VectorXd gamma = solve_full_rank(W, X.col(c), w_names, "2sls first stage");
      X_hat.col(c) = W * gamma;
    }
  }

  const Eigen::MatrixXd D_hat = with_intercept(X_hat, intercept);
  if (y.size() <= D_hat.cols()) throw DataError("2sls: insufficient observations");
  const Eigen::VectorXd b = solve_full_rank(D_hat, y, r.names, "2sls second stage");
  r.coefficients.assign(b.data(), b.data() + b.size());

  // structural residual: original regressors, 2SLS coefficients
  const Eigen::MatrixXd D = with_intercept(X, intercept);
  const Eigen::VectorXd resid = y - D * b;
  fill_inference(r, D_hat, resid);

  if (endogenous_cols.size() == 1) {
    Eigen::Index n_exog = 0;
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (!is_endog[j]) ++n_exog;
    Eigen::MatrixXd exog(X.rows(), (intercept ? 1 : 0) + n_exog);
    Eigen::Index ec = 0;
    if (intercept) exog.col(ec++).setOnes();
    for (Eigen::Index j = 0; j < X.cols(); ++j)
      if (!is_endog[j]) exog.col(ec++) = X.col(j);
    const double f = cragg_donald(X.col(endogenous_cols[0]), exog, Z);
    r.instrument_strength = classify_instrument_strength(f);
  }
  return r;
}

double cragg_donald(const Eigen::VectorXd& endogenous, const Eigen::MatrixXd& exogenous,
                    const Eigen::MatrixXd& Z) {
  if (Z.cols() == 0) throw ConfigError("weak-instrument F: no excluded instruments");
  const Eigen::Index n = endogenous.size();
  if (exogenous.rows() != n || Z.rows() != n)
    throw DataError("weak-instrument F: row counts differ");
  const Eigen::Index k_u = exogenous.cols() + Z.cols();
  if (n <= k_u) throw DataError("weak-instrument F: insufficient observations");

  auto rss_of = [&](const Eigen::MatrixXd& D) {
    if (D.cols() == 0) return endogenous.squaredNorm();
    const Eigen::VectorXd b =
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd>(D).solve(endogenous);
    return (endogenous - D * b).squaredNorm();
  };

  Eigen::MatrixXd full(n, k_u);
  full.leftCols(exogenous.cols()) = exogenous;
  full.rightCols(Z.cols()) = Z;

  const double rss_restricted = rss_of(exogenous);
  const double rss_unrestricted = rss_of(full);
  const double q = static_cast<double>(Z.cols());
  if (rss_unrestricted <= 1e-14 * std::max(1.0, rss_restricted))
    return std::numeric_limits<double>::infinity();
  return ((rss_restricted - rss_unrestricted) / q) /
         (rss_unrestricted / static_cast<double>(n - k_u));
}

RegressionGrid scale_regressions(const SeriesTable& table,
                                 const std::map<std::string, Decomposition>& decompositions,
                                 const RegressionSpec& spec) {
  std::vector<std::string> vars = {spec.dependent};
  vars.insert(vars.end(), spec.regressors.begin(), spec.regressors.end());
  for (const std::string& v : vars) {
    if (!table.has_column(v)) throw ConfigError("regression references missing column '" + v + "'");
    if (decompositions.find(v) == decompositions.end())
      throw ConfigError("no decomposition supplied for variable '" + v + "'");
  }
  for (const std::string& e : spec.endogenous)
    if (std::find(spec.regressors.begin(), spec.regressors.end(), e) == spec.regressors.end())
      throw ConfigError("endogenous variable '" + e + "' is not a regressor");

  RegressionGrid grid;
  grid.name = spec.name;
  grid.dependent = spec.dependent;
  grid.estimator = spec.estimator;

  int max_modes = 0;
  for (const std::string& v : vars) {
    const int k = static_cast<int>(decompositions.at(v).imfs.size());
    max_modes = std::max(max_modes, k);
  }
  for (const std::string& v : vars) {
    const int k = static_cast<int>(decompositions.at(v).imfs.size());
    if (k < max_modes)
      grid.warnings.push_back("variable '" + v + "' has " + std::to_string(k) + " modes; modes " +
                              std::to_string(k + 1) + ".." + std::to_string(max_modes) +
                              " treated as zero");
  }

  // series for variable v at a given column: the raw series for the
  // time-domain column, IMF k for column k, zero-padded past the mode count
  auto series_at = [&](const std::string& v, int mode) -> std::vector<double> {
    if (mode == 0) return table.column(v).values;
    const Decomposition& d = decompositions.at(v);
    if (mode <= static_cast<int>(d.imfs.size())) return d.imfs[mode - 1].values;
    return std::vector<double>(d.source.values.size(), 0.0);
  };

  std::vector<int> endog_cols;
  for (const std::string& e : spec.endogenous) {
    const auto it = std::find(spec.regressors.begin(), spec.regressors.end(), e);
    endog_cols.push_back(static_cast<int>(it - spec.regressors.begin()));
  }

  grid.columns.push_back("Time domain");
  for (int m = 1; m <= max_modes; ++m) grid.columns.push_back("IMF" + std::to_string(m));

  for (int mode = 0; mode <= max_modes; ++mode) {
    GridCell cell;
    try {
      const std::vector<double> yv = series_at(spec.dependent, mode);
      const Eigen::Index n = static_cast<Eigen::Index>(yv.size());
      Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(yv.data(), n);
      Eigen::MatrixXd X(n, static_cast<Eigen::Index>(spec.regressors.size()));
      for (std::size_t j = 0; j < spec.regressors.size(); ++j) {
        const std::vector<double> xv = series_at(spec.regressors[j], mode);
        X.col(static_cast<Eigen::Index>(j)) =
            Eigen::Map<const Eigen::VectorXd>(xv.data(), n);
      }
      if (spec.estimator == Estimator::ols) {
        cell.result = ols(y, X, spec.intercept, spec.regressors);
      } else {
        const Eigen::MatrixXd Z = build_instruments(X, spec.instrument_lags);
        const Eigen::Index rows = Z.rows();
        const Eigen::VectorXd y_t = y.tail(rows);
        const Eigen::MatrixXd X_t = X.bottomRows(rows);
        cell.result = two_sls(y_t, X_t, endog_cols, Z, spec.intercept, spec.regressors);
      }
    } catch (const std::exception& e) {
      cell.error = e.what();
    }
    grid.cells.push_back(std::move(cell));
  }
  return grid;
}

}  // namespace emdec
