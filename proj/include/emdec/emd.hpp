#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "emdec/series.hpp"

namespace emdec {

enum class BoundaryPolicy { mirror, clamp };

/// Sifting configuration. The stopping rule is the Cauchy-type
/// standard-deviation criterion SD = sum((h_prev - h)^2) / sum(h_prev^2).
struct SiftConfig {
  double sd_threshold = 0.25;
  int max_sift_iterations = 100;
  BoundaryPolicy boundary = BoundaryPolicy::mirror;
};

/// One intrinsic mode function: extrema and zero-crossing counts differ by at
/// most one and the local envelope mean is near zero.
struct Imf {
  std::vector<double> values;
  int index = 1;  // 1-based mode number
  int sift_iterations = 0;
};

struct DecompositionDiagnostics {
  bool cap_hit = false;
  std::string termination;  // "monotone", "envelope", "cap"
  std::vector<std::string> warnings;
};

/// source = sum(imfs) + residue pointwise; imfs ordered highest frequency first.
struct Decomposition {
  TimeSeries source;
  std::vector<Imf> imfs;
  std::vector<double> residue;
  SiftConfig config;
  DecompositionDiagnostics diagnostics;
};

struct ExtremaSet {
  std::vector<int> maxima;
  std::vector<int> minima;
};

/// Interior strict local extrema. A plateau flanked by lower (higher)
/// neighbors counts once, at its midpoint index rounded down. Endpoints are
/// never returned. Input must have length >= 3.
ExtremaSet find_local_extrema(const std::vector<double>& values);

/// Natural cubic spline through the knot values, evaluated at every sample
/// index. Mirror policy reflects up to two extrema beyond each end first;
/// clamp pins the envelope to the series end values instead.
std::vector<double> envelope(const std::vector<double>& values, const std::vector<int>& knots,
                             BoundaryPolicy policy);

/// Pointwise average of the upper (maxima) and lower (minima) envelopes.
/// Throws EnvelopeError when either extrema set is empty.
std::vector<double> mean_envelope(const std::vector<double>& values, const SiftConfig& config);

/// One sifting step: h minus its mean envelope.
std::vector<double> sift_once(const std::vector<double>& h, const SiftConfig& config);

struct ExtractResult {
  std::optional<Imf> imf;        // empty: extraction terminated, residual untouched
  std::vector<double> residual;  // input minus imf when imf is present
};

/// Sifts the residual into one IMF. Returns no IMF when the residual has too
/// few extrema to form envelopes.
ExtractResult extract_imf(const std::vector<double>& residual, const SiftConfig& config);

/// Full decomposition: extracts IMFs until the residue is monotone/trivial or
/// the floor(log2 N) mode cap is reached. Input must have length >= 8.
Decomposition decompose(const TimeSeries& s, const SiftConfig& config = {});

/// True iff non-decreasing, non-increasing, or fewer than 2 interior extrema.
bool is_monotone_or_trivial(const std::vector<double>& values);

/// Sign changes between strictly positive and strictly negative values,
/// ignoring exact zeros in between.
int zero_crossings(const std::vector<double>& values);

/// |#extrema - #zero crossings| <= 1.
bool imf_well_formed(const std::vector<double>& values);

/// floor(log2 n): the mode-count cap.
int max_imf_count(std::size_t n);

}  // namespace emdec
