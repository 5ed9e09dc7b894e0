#include "emdec/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "emdec/errors.hpp"
#include "emdec/stats.hpp"

namespace emdec {

namespace {

double sample_variance(const std::vector<double>& v) {
  const std::size_t n = v.size();
  if (n < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return ss / (n - 1);
}

// Correlations of one component against the source, shared by IMF rows,
// the residue row, and band summaries.
void fill_correlations(const std::vector<double>& component, const std::vector<double>& source,
                       double& pr, double& pp, double& kt, double& kp) {
  try {
    const CorrResult p = pearson_corr(component, source);
    pr = p.value;
    pp = p.p;
  } catch (const DataError&) {
    pr = std::numeric_limits<double>::quiet_NaN();
    pp = std::numeric_limits<double>::quiet_NaN();
  }
  try {
    const CorrResult k = kendall_tau(component, source);
    kt = k.value;
    kp = k.p;
  } catch (const DataError&) {
    kt = std::numeric_limits<double>::quiet_NaN();
    kp = std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

BandMap BandMap::default_for(int imf_count) {
  if (imf_count < 0) throw ConfigError("band map needs a non-negative mode count");
  BandMap m;
  if (imf_count == 7) {
    m.short_run = {1, 2};
    m.medium_run = {3, 4};
    m.long_run = {5, 6, 7};
    return m;
  }
  const int n_short = (imf_count + 2) / 3;
  const int remaining = imf_count - n_short;
  const int n_medium = (remaining + 1) / 2;
  for (int i = 1; i <= imf_count; ++i) {
    if (i <= n_short)
      m.short_run.push_back(i);
    else if (i <= n_short + n_medium)
      m.medium_run.push_back(i);
    else
      m.long_run.push_back(i);
  }
  return m;
}

bool BandMap::covers(int imf_count) const {
  std::vector<bool> seen(static_cast<std::size_t>(imf_count) + 1, false);
  auto mark = [&](const std::vector<int>& group) {
    for (int i : group) {
      if (i < 1 || i > imf_count || seen[i]) return false;
      seen[i] = true;
    }
    return true;
  };
  if (!mark(short_run) || !mark(medium_run) || !mark(long_run)) return false;
  for (int i = 1; i <= imf_count; ++i)
    if (!seen[i]) return false;
  return true;
}

double mean_period(const std::vector<double>& values) {
  if (values.size() < 3)
    throw DataError("mean period needs at least 3 samples, got " + std::to_string(values.size()));
  const ExtremaSet ex = find_local_extrema(values);
  if (ex.maxima.empty()) return std::numeric_limits<double>::infinity();
  return static_cast<double>(values.size()) / static_cast<double>(ex.maxima.size());
}

CorrResult pearson_corr(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw DataError("pearson: length mismatch");
  if (n < 3) throw DataError("pearson: need at least 3 observations");
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw DataError("pearson: constant input");
  double r = sxy / std::sqrt(sxx * syy);
  r = std::clamp(r, -1.0, 1.0);
  const double df = static_cast<double>(n) - 2.0;
  double p;
  if (1.0 - r * r <= 0.0) {
    p = 0.0;
  } else {
    const double t = r * std::sqrt(df / (1.0 - r * r));
    p = stats::student_t_two_tailed_p(t, df);
  }
  return {r, p};
}

CorrResult kendall_tau(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw DataError("kendall: length mismatch");
  if (n < 3) throw DataError("kendall: need at least 3 observations");

  // tau-b = S / sqrt((n0 - T_x)(n0 - T_y)): T_x counts pairs tied in x
  // (jointly tied pairs are tied in both margins).
  long long concordant = 0, discordant = 0;
  long long ties_x = 0, ties_y = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = x[i] - x[j];
      const double dy = y[i] - y[j];
      if (dx == 0.0) ++ties_x;
      if (dy == 0.0) ++ties_y;
      if (dx == 0.0 || dy == 0.0) continue;
      if ((dx > 0.0) == (dy > 0.0))
        ++concordant;
      else
        ++discordant;
    }
  }
  const double s = static_cast<double>(concordant - discordant);
  const double n0 = 0.5 * static_cast<double>(n) * (static_cast<double>(n) - 1.0);
  const double denom =
      std::sqrt((n0 - static_cast<double>(ties_x)) * (n0 - static_cast<double>(ties_y)));
  if (denom == 0.0) throw DataError("kendall: constant input");
  const double tau = std::clamp(s / denom, -1.0, 1.0);

  const double var_s =
      static_cast<double>(n) * (static_cast<double>(n) - 1.0) * (2.0 * static_cast<double>(n) + 5.0) / 18.0;
  const double z = s / std::sqrt(var_s);
  return {tau, stats::normal_two_tailed_p(z)};
}

std::vector<double> variance_shares(const Decomposition& d) {
  if (d.imfs.empty() && d.residue.empty()) throw DataError("variance shares: empty decomposition");
  std::vector<double> vars;
  vars.reserve(d.imfs.size() + 1);
  for (const Imf& imf : d.imfs) vars.push_back(sample_variance(imf.values));
  vars.push_back(sample_variance(d.residue));
  const double total = std::accumulate(vars.begin(), vars.end(), 0.0);
  if (total <= 0.0) throw DataError("variance shares: all components constant");
  for (double& v : vars) v /= total;
  return vars;
}

std::vector<BandSummary> aggregate_bands(const Decomposition& d, const BandMap& map) {
  const int k = static_cast<int>(d.imfs.size());
  if (!map.covers(k))
    throw ConfigError("band map does not cover all " + std::to_string(k) + " modes exactly once");
  const std::size_t n = d.source.values.size();

  auto sum_of = [&](const std::vector<int>& modes) {
    std::vector<double> acc(n, 0.0);
    for (int m : modes)
      for (std::size_t t = 0; t < n; ++t) acc[t] += d.imfs[m - 1].values[t];
    return acc;
  };

  std::vector<BandSummary> out(3);
  out[0].band = "high-frequency";
  out[0].series = sum_of(map.short_run);
  out[1].band = "low-frequency";
  std::vector<int> low = map.medium_run;
  low.insert(low.end(), map.long_run.begin(), map.long_run.end());
  out[1].series = sum_of(low);
  out[2].band = "trend";
  out[2].series = d.residue;

  // shares against the same denominator the per-mode table uses
  std::vector<double> vars = {sample_variance(out[0].series), sample_variance(out[1].series),
                              sample_variance(out[2].series)};
  double total = 0.0;
  for (const Imf& imf : d.imfs) total += sample_variance(imf.values);
  total += sample_variance(d.residue);
  for (std::size_t b = 0; b < out.size(); ++b) {
    fill_correlations(out[b].series, d.source.values, out[b].pearson_r, out[b].pearson_p,
                      out[b].kendall_tau, out[b].kendall_p);
    out[b].variance_share = total > 0.0 ? vars[b] / total : 0.0;
  }
  return out;
}

std::vector<ImfSummary> summarize_decomposition(const Decomposition& d) {
  const std::vector<double> shares = variance_shares(d);
  std::vector<ImfSummary> rows;
  rows.reserve(d.imfs.size() + 1);
  for (std::size_t i = 0; i < d.imfs.size(); ++i) {
    ImfSummary row;
    row.mode = "IMF" + std::to_string(i + 1);
    row.mean_period = mean_period(d.imfs[i].values);
    fill_correlations(d.imfs[i].values, d.source.values, row.pearson_r, row.pearson_p,
                      row.kendall_tau, row.kendall_p);
    row.variance_share = shares[i];
    rows.push_back(std::move(row));
  }
  ImfSummary res;
  res.mode = "residue";
  res.mean_period = mean_period(d.residue);
  fill_correlations(d.residue, d.source.values, res.pearson_r, res.pearson_p, res.kendall_tau,
                    res.kendall_p);
  res.variance_share = shares.back();
  rows.push_back(std::move(res));
  return rows;
}

std::string significance_stars(double p) {
  if (p < 0.01) return "***";
  if (p < 0.05) return "**";
  if (p < 0.10) return "*";
  return "";
}

}  // namespace emdec
