#include "emdec/emd.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "emdec/spline.hpp"

namespace emdec {

namespace {

// Knots as (abscissa, ordinate) pairs; mirrored pseudo-extrema fall outside
// the 0..N-1 sample window, so abscissae are doubles.
struct KnotSet {
  std::vector<double> x;
  std::vector<double> y;
};

KnotSet extend_knots(const std::vector<double>& values, const std::vector<int>& knots,
                     BoundaryPolicy policy) {
  const int n = static_cast<int>(values.size());
  KnotSet ks;
  if (policy == BoundaryPolicy::mirror && !knots.empty()) {
    const int m = static_cast<int>(knots.size());
    const int take = std::min(2, m);
    // reflect about sample 0: t -> -t, in descending t order so x stays sorted
    for (int i = take - 1; i >= 0; --i) {
      ks.x.push_back(-static_cast<double>(knots[i]));
      ks.y.push_back(values[knots[i]]);
    }
    for (int t : knots) {
      ks.x.push_back(t);
      ks.y.push_back(values[t]);
    }
    // reflect about sample n-1: t -> 2(n-1) - t
    for (int i = 0; i < take; ++i) {
      const int t = knots[m - 1 - i];
      ks.x.push_back(2.0 * (n - 1) - t);
      ks.y.push_back(values[t]);
    }
  } else {
    if (knots.empty() || knots.front() != 0) {
      ks.x.push_back(0.0);
      ks.y.push_back(values.front());
    }
    for (int t : knots) {
      ks.x.push_back(t);
      ks.y.push_back(values[t]);
    }
    if (knots.empty() || knots.back() != n - 1) {
      ks.x.push_back(n - 1);
      ks.y.push_back(values.back());
    }
  }
  return ks;
}

}  // namespace

ExtremaSet find_local_extrema(const std::vector<double>& values) {
  const int n = static_cast<int>(values.size());
  if (n < 3) throw DataError("extrema search needs at least 3 samples, got " + std::to_string(n));
  ExtremaSet out;
  int i = 1;
  while (i < n - 1) {
    // maximal run of equal values starting at i
    int j = i;
    while (j + 1 < n && values[j + 1] == values[i]) ++j;
    if (j >= n - 1) break;                 // run touches the right endpoint
    if (values[i - 1] == values[i]) {      // run actually started at or before i-1
      i = j + 1;
      continue;
    }
    const double left = values[i - 1];
    const double right = values[j + 1];
    const double v = values[i];
    const int mid = (i + j) / 2;
    if (left < v && right < v)
      out.maxima.push_back(mid);
    else if (left > v && right > v)
      out.minima.push_back(mid);
    i = j + 1;
  }
  return out;
}

std::vector<double> envelope(const std::vector<double>& values, const std::vector<int>& knots,
                             BoundaryPolicy policy) {
  const KnotSet ks = extend_knots(values, knots, policy);
  if (ks.x.size() < 2)
    throw EnvelopeError("fewer than 2 usable knots after boundary extension");
  const CubicSpline spline(ks.x, ks.y);
  std::vector<double> env(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) env[t] = spline(static_cast<double>(t));
  return env;
}

std::vector<double> mean_envelope(const std::vector<double>& values, const SiftConfig& config) {
  const ExtremaSet ex = find_local_extrema(values);
  if (ex.maxima.empty() || ex.minima.empty())
    throw EnvelopeError("no extrema: cannot form upper and lower envelopes");
  const std::vector<double> upper = envelope(values, ex.maxima, config.boundary);
  const std::vector<double> lower = envelope(values, ex.minima, config.boundary);
  std::vector<double> mean(values.size());
  for (std::size_t t = 0; t < values.size(); ++t) mean[t] = 0.5 * (upper[t] + lower[t]);
  return mean;
}

std::vector<double> sift_once(const std::vector<double>& h, const SiftConfig& config) {
  const std::vector<double> m = mean_envelope(h, config);
  std::vector<double> out(h.size());
  for (std::size_t t = 0; t < h.size(); ++t) out[t] = h[t] - m[t];
  return out;
}

ExtractResult extract_imf(const std::vector<double>& residual, const SiftConfig& config) {
  // A residual with fewer than 2 maxima or 2 minima carries no further mode;
  // it becomes the residue.
  if (residual.size() < 3) return {std::nullopt, residual};
  const ExtremaSet ex = find_local_extrema(residual);
  if (ex.maxima.size() < 2 || ex.minima.size() < 2) return {std::nullopt, residual};

  std::vector<double> h = residual;
  int iterations = 0;
  try {
    h = sift_once(h, config);
    iterations = 1;
  } catch (const EnvelopeError&) {
    return {std::nullopt, residual};
  }

  std::vector<double> prev = residual;
  while (iterations < config.max_sift_iterations) {
    double num = 0.0, den = 0.0;
    for (std::size_t t = 0; t < h.size(); ++t) {
      const double d = prev[t] - h[t];
      num += d * d;
      den += prev[t] * prev[t];
    }
    const double sd = den > 0.0 ? num / den : 0.0;
    // The SD tolerance alone can leave riding waves behind; require the
    // extrema/zero-crossing property as well before accepting the mode.
    if (sd < config.sd_threshold && imf_well_formed(h)) break;
    prev = h;
    try {
      h = sift_once(h, config);
    } catch (const EnvelopeError&) {
      break;  // keep the current candidate
    }
    ++iterations;
  }

  Imf imf;
  imf.values = h;
  imf.sift_iterations = iterations;
  std::vector<double> rem(residual.size());
  for (std::size_t t = 0; t < residual.size(); ++t) rem[t] = residual[t] - h[t];
  return {std::move(imf), std::move(rem)};
}

Decomposition decompose(const TimeSeries& s, const SiftConfig& config) {
  const std::size_t n = s.values.size();
  if (n < 8) throw DataError("decomposition needs at least 8 samples, got " + std::to_string(n));
  if (!(config.sd_threshold > 0.0)) throw ConfigError("sd_threshold must be positive");
  if (config.max_sift_iterations < 1) throw ConfigError("max_sift_iterations must be >= 1");

  Decomposition d;
  d.source = s;
  d.config = config;
  const int cap = max_imf_count(n);

  std::vector<double> residual = s.values;
  while (true) {
    if (is_monotone_or_trivial(residual)) {
      d.diagnostics.termination = "monotone";
      break;
    }
    if (static_cast<int>(d.imfs.size()) >= cap) {
      d.diagnostics.cap_hit = true;
      d.diagnostics.termination = "cap";
      d.diagnostics.warnings.push_back("mode cap floor(log2 N) = " + std::to_string(cap) +
                                       " reached with an oscillating residue");
      break;
    }
    ExtractResult ex = extract_imf(residual, config);
    if (!ex.imf) {
      d.diagnostics.termination = "envelope";
      break;
    }
    ex.imf->index = static_cast<int>(d.imfs.size()) + 1;
    d.imfs.push_back(std::move(*ex.imf));
    residual = std::move(ex.residual);
  }
  d.residue = std::move(residual);

  // Mean periods should grow with mode index; warn when they do not.
  for (std::size_t i = 0; i + 1 < d.imfs.size(); ++i) {
    const auto a = find_local_extrema(d.imfs[i].values);
    const auto b = find_local_extrema(d.imfs[i + 1].values);
    if (a.maxima.size() >= 2 && b.maxima.size() >= 2 &&
        a.maxima.size() <= b.maxima.size()) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "mean period not increasing between IMF%zu and IMF%zu",
                    i + 1, i + 2);
      d.diagnostics.warnings.push_back(buf);
    }
  }
  return d;
}

bool is_monotone_or_trivial(const std::vector<double>& values) {
  const std::size_t n = values.size();
  if (n < 3) return true;
  bool nondec = true, noninc = true;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] < values[i - 1]) nondec = false;
    if (values[i] > values[i - 1]) noninc = false;
  }
  if (nondec || noninc) return true;
  const ExtremaSet ex = find_local_extrema(values);
  return ex.maxima.size() + ex.minima.size() < 2;
}

int zero_crossings(const std::vector<double>& values) {
  int count = 0;
  int last_sign = 0;
  for (double v : values) {
    const int sign = v > 0.0 ? 1 : (v < 0.0 ? -1 : 0);
    if (sign == 0) continue;
    if (last_sign != 0 && sign != last_sign) ++count;
    last_sign = sign;
  }
  return count;
}

bool imf_well_formed(const std::vector<double>& values) {
  if (values.size() < 3) return true;
  const ExtremaSet ex = find_local_extrema(values);
  const int extrema = static_cast<int>(ex.maxima.size() + ex.minima.size());
  return std::abs(extrema - zero_crossings(values)) <= 1;
}

int max_imf_count(std::size_t n) {
  return n == 0 ? 0 : static_cast<int>(std::bit_width(n)) - 1;
}

}  // namespace emdec
