#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "emdec/emd.hpp"
#include "emdec/series.hpp"

namespace emdec {

enum class Estimator { ols, tsls };

// Stock-Yogo weak-identification critical values for the first-stage F.
inline constexpr double kWeakInstrumentStrong = 17.02;    // 10% maximal size
inline constexpr double kWeakInstrumentMarginal = 13.85;  // 15% maximal size

struct InstrumentStrength {
  double cragg_donald_f = 0.0;
  bool strong = false;    // F > 17.02
  bool marginal = false;  // F > 13.85
};

InstrumentStrength classify_instrument_strength(double cragg_donald_f);

struct RegressionResult {
  std::vector<std::string> names;  // "const" first when an intercept is fitted
  std::vector<double> coefficients;
  std::vector<double> t_stats;
  std::vector<double> p_values;
  double r_squared = std::numeric_limits<double>::quiet_NaN();  // OLS only
  int n_obs = 0;
  int df_residual = 0;
  std::optional<InstrumentStrength> instrument_strength;  // 2SLS, one endogenous regressor
};

// Least squares with classical (homoskedastic) t-statistics.
// X carries the regressors only; the constant column is added internally.
RegressionResult ols(const Eigen::VectorXd& y, const Eigen::MatrixXd& X, bool intercept = true,
                     const std::vector<std::string>& names = {});

// Lag-1..lags of every column of X, stacked column-wise. The result has
// n - lags rows; callers must drop the first `lags` rows of y and X to align.
Eigen::MatrixXd build_instruments(const Eigen::MatrixXd& X, int lags);

// Two-stage least squares. endogenous_cols indexes columns of X; Z holds the
// excluded instruments (already row-aligned with y and X). t-statistics use
// the residual y - X*b with the original regressors.
RegressionResult two_sls(const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
                         const std::vector<int>& endogenous_cols, const Eigen::MatrixXd& Z,
                         bool intercept = true, const std::vector<std::string>& names = {});

// First-stage F on the excluded instruments after partialling out the
// exogenous block (pass the constant inside `exogenous` if the model has
// one). With a single endogenous regressor this is the Cragg-Donald value.
double cragg_donald(const Eigen::VectorXd& endogenous, const Eigen::MatrixXd& exogenous,
                    const Eigen::MatrixXd& Z);

struct RegressionSpec {
  std::string name;  // label used in report filenames
  std::string dependent;
  std::vector<std::string> regressors;
  bool intercept = true;
  Estimator estimator = Estimator::ols;
  std::vector<std::string> endogenous;  // tsls only; subset of regressors
  int instrument_lags = 1;              // tsls only
};

struct GridCell {
  std::optional<RegressionResult> result;
  std::string error;  // set when the cell could not be estimated
};

// One regression per column: "Time domain" on the raw series, then one per
// mode index on matched IMFs.
struct RegressionGrid {
  std::string name;
  std::string dependent;
  Estimator estimator = Estimator::ols;
  std::vector<std::string> columns;
  std::vector<GridCell> cells;
  std::vector<std::string> warnings;
};

RegressionGrid scale_regressions(const SeriesTable& table,
                                 const std::map<std::string, Decomposition>& decompositions,
                                 const RegressionSpec& spec);

}  // namespace emdec
