#include "emdec/synth.hpp"

#include <cmath>
#include <numbers>

#include "emdec/causality.hpp"
#include "emdec/errors.hpp"

namespace emdec {

double Rng::next_gaussian() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller on two fresh uniforms; u1 nudged away from zero for the log
  double u1 = next_unit();
  const double u2 = next_unit();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

TimeSeries gen_tone_mix(const ToneMixSpec& spec) {
  if (spec.length < 8)
    throw ConfigError("tone mix needs length >= 8, got " + std::to_string(spec.length));
  for (const Tone& t : spec.tones)
    if (!(t.frequency > 0.0 && t.frequency < 0.5))
      throw ConfigError("tone frequency must lie in (0, 0.5)");

  Rng rng(spec.seed);
  TimeSeries s;
  s.name = spec.name;
  s.start = spec.start;
  s.values.resize(spec.length);
  for (int t = 0; t < spec.length; ++t) {
    double v = 0.0;
    for (const Tone& tone : spec.tones)
      v += tone.amplitude * std::sin(2.0 * std::numbers::pi * tone.frequency * t + tone.phase);
    double power = 1.0;
    for (double c : spec.trend) {
      v += c * power;
      power *= t;
    }
    if (spec.noise_sd > 0.0) v += spec.noise_sd * rng.next_gaussian();
    s.values[t] = v;
  }
  return s;
}

std::pair<TimeSeries, TimeSeries> gen_var_process(const VarGenSpec& spec) {
  if (spec.p < 1) throw ConfigError("VAR generator needs p >= 1");
  if (static_cast<int>(spec.lag_coefs.size()) != spec.p)
    throw ConfigError("VAR generator: expected " + std::to_string(spec.p) +
                      " coefficient blocks, got " + std::to_string(spec.lag_coefs.size()));
  if (spec.length < 1) throw ConfigError("VAR generator needs a positive length");
  if (spec.burn_in < 100)
    throw ConfigError("VAR generator burn-in must be >= 100, got " +
                      std::to_string(spec.burn_in));
  const double radius = companion_spectral_radius(spec.lag_coefs);
  if (radius >= 1.0) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "VAR generator: spectral radius %.4f >= 1, not stationary",
                  radius);
    throw ConfigError(buf);
  }

  // innovation shaping: lower Cholesky of the 2x2 covariance, by hand so the
  // generator stays independent of the estimation stack
  const double c00 = spec.innovation_cov(0, 0);
  const double c10 = spec.innovation_cov(1, 0);
  const double c11 = spec.innovation_cov(1, 1);
  if (!(c00 > 0.0) || !(c11 > 0.0) || spec.innovation_cov(0, 1) != c10)
    throw ConfigError("VAR generator: innovation covariance must be symmetric positive definite");
  const double l00 = std::sqrt(c00);
  const double l10 = c10 / l00;
  const double rem = c11 - l10 * l10;
  if (!(rem > 0.0))
    throw ConfigError("VAR generator: innovation covariance must be symmetric positive definite");
  const double l11 = std::sqrt(rem);

  Rng rng(spec.seed);
  const int total = spec.burn_in + spec.length;
  std::vector<double> xs(total, 0.0), ys(total, 0.0);
  for (int t = 0; t < total; ++t) {
    const double g0 = rng.next_gaussian();
    const double g1 = rng.next_gaussian();
    double ex = spec.intercepts(0) + l00 * g0;
    double ey = spec.intercepts(1) + l10 * g0 + l11 * g1;
    for (int l = 1; l <= spec.p; ++l) {
      const double px = t - l >= 0 ? xs[t - l] : 0.0;
      const double py = t - l >= 0 ? ys[t - l] : 0.0;
      ex += spec.lag_coefs[l - 1](0, 0) * px + spec.lag_coefs[l - 1](0, 1) * py;
      ey += spec.lag_coefs[l - 1](1, 0) * px + spec.lag_coefs[l - 1](1, 1) * py;
    }
    xs[t] = ex;
    ys[t] = ey;
  }

  TimeSeries sx, sy;
  sx.name = "x";
  sy.name = "y";
  sx.start = sy.start = spec.start;
  sx.values.assign(xs.begin() + spec.burn_in, xs.end());
  sy.values.assign(ys.begin() + spec.burn_in, ys.end());
  return {std::move(sx), std::move(sy)};
}

std::vector<double> brute_force_ols(const std::vector<double>& y,
                                    const std::vector<std::vector<double>>& columns,
                                    bool intercept) {
  const std::size_t n = y.size();
  std::vector<std::vector<double>> design;
  if (intercept) design.emplace_back(n, 1.0);
  for (const auto& c : columns) {
    if (c.size() != n) throw DataError("oracle ols: column length mismatch");
    design.push_back(c);
  }
  const std::size_t k = design.size();
  if (n <= k) throw DataError("oracle ols: too few observations");

  // normal equations A b = rhs with A = X'X
  std::vector<std::vector<double>> a(k, std::vector<double>(k + 1, 0.0));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      double s = 0.0;
      for (std::size_t t = 0; t < n; ++t) s += design[i][t] * design[j][t];
      a[i][j] = s;
    }
    double s = 0.0;
    for (std::size_t t = 0; t < n; ++t) s += design[i][t] * y[t];
    a[i][k] = s;
  }

  // Gaussian elimination, partial pivoting
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < k; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) throw NumericError("oracle ols: singular normal equations");
    std::swap(a[col], a[pivot]);
    for (std::size_t r = col + 1; r < k; ++r) {
      const double factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= k; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<double> b(k, 0.0);
  for (std::size_t i = k; i-- > 0;) {
    double s = a[i][k];
    for (std::size_t j = i + 1; j < k; ++j) s -= a[i][j] * b[j];
    b[i] = s / a[i][i];
  }
  return b;
}

ExtremaSet brute_force_extrema(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (n < 3) throw DataError("oracle extrema: need at least 3 samples");
  ExtremaSet out;
  for (int i = 1; i < n - 1; ++i) {
    // expand the equal-value run containing i, in both directions
    int lo = i;
    while (lo - 1 >= 0 && values[lo - 1] == values[i]) --lo;
    int hi = i;
    while (hi + 1 < n && values[hi + 1] == values[i]) ++hi;
    if (lo == 0 || hi == n - 1) continue;  // run touches an endpoint
    if (i != (lo + hi) / 2) continue;      // one representative per run
    const double v = values[i];
    if (values[lo - 1] < v && values[hi + 1] < v)
      out.maxima.push_back(i);
    else if (values[lo - 1] > v && values[hi + 1] > v)
      out.minima.push_back(i);
  }
  return out;
}

}  // namespace emdec
