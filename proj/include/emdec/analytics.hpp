#pragma once

#include <limits>
#include <string>
#include <vector>

#include "emdec/emd.hpp"

namespace emdec {

// One row of a mode summary table: how a single IMF (or the residue) relates
// to the series it came from.
struct ImfSummary {
  std::string mode;        // "IMF1".."IMFk" or "residue"
  double mean_period = std::numeric_limits<double>::infinity();  // inf = no peaks
  double pearson_r = 0.0;
  double pearson_p = 1.0;
  double kendall_tau = 0.0;
  double kendall_p = 1.0;
  double variance_share = 0.0;
};

// Assignment of mode indices (1-based) to horizon groups. The residue always
// maps to the trend component and is not listed here.
struct BandMap {
  std::vector<int> short_run;
  std::vector<int> medium_run;
  std::vector<int> long_run;

  // For 7 modes: 1-2 short, 3-4 medium, 5-7 long. Other counts split into
  // thirds, rounding the short group up.
  static BandMap default_for(int imf_count);
  bool covers(int imf_count) const;
};

struct BandSummary {
  std::string band;  // "high-frequency", "low-frequency", "trend"
  std::vector<double> series;
  double pearson_r = 0.0;
  double pearson_p = 1.0;
  double kendall_tau = 0.0;
  double kendall_p = 1.0;
  double variance_share = 0.0;
};

struct CorrResult {
  double value = 0.0;
  double p = 1.0;
};

// Series length divided by the number of local maxima; +infinity when the
// component has no peaks (e.g. monotone residue).
double mean_period(const std::vector<double>& values);

// Sample Pearson r with a two-tailed p-value from t = r sqrt((n-2)/(1-r^2))
// against Student-t(n-2). Throws DataError on constant input.
CorrResult pearson_corr(const std::vector<double>& x, const std::vector<double>& y);

// Tie-corrected Kendall tau-b; two-tailed p from the normal approximation
// with variance n(n-1)(2n+5)/18 on the concordance statistic.
CorrResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y);

// share_i = var(c_i) / (sum_j var(c_j) + var(residue)). Returned in mode
// order with the residue share last; sums to 1 by construction.
std::vector<double> variance_shares(const Decomposition& d);

// Regroup modes into high-frequency (short-run sum), low-frequency
// (medium + long sum), and trend (residue), each summarized against the
// source series.
std::vector<BandSummary> aggregate_bands(const Decomposition& d, const BandMap& map);

// One row per IMF plus one for the residue, in mode order.
std::vector<ImfSummary> summarize_decomposition(const Decomposition& d);

// "***" below 1%, "**" below 5%, "*" below 10%, else empty.
std::string significance_stars(double p);

}  // namespace emdec
