#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "emdec/emd.hpp"
#include "emdec/series.hpp"

namespace emdec {

// Seeded stream with a fully specified integer core (std::mt19937_64, whose
// output sequence is fixed by the standard) so generated fixtures replicate
// across platforms and languages. Uniform doubles take the top 53 bits;
// Gaussian variates come from the Box-Muller transform on consecutive
// uniforms, one spare cached.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double next_gaussian();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct Tone {
  double frequency = 0.1;  // cycles per observation period, in (0, 0.5)
  double amplitude = 1.0;
  double phase = 0.0;
};

struct ToneMixSpec {
  std::vector<Tone> tones;
  std::vector<double> trend;  // polynomial coefficients, constant term first
  double noise_sd = 0.0;
  int length = 64;
  std::uint64_t seed = 1;
  std::string name = "synthetic";
  Period start{2000, 1};
};

// Sum of sinusoids plus trend polynomial plus seeded Gaussian noise.
TimeSeries gen_tone_mix(const ToneMixSpec& spec);

struct VarGenSpec {
  int p = 1;
  std::vector<Eigen::Matrix2d> lag_coefs;  // lag_coefs[l](eq, var), as in VarModel
  Eigen::Vector2d intercepts = Eigen::Vector2d::Zero();
  Eigen::Matrix2d innovation_cov = Eigen::Matrix2d::Identity();
  int length = 500;
  int burn_in = 500;
  std::uint64_t seed = 1;
  Period start{2000, 1};
};

// Simulates the bivariate system from zero initial state, discarding the
// burn-in. Rejects non-stationary coefficient sets.
std::pair<TimeSeries, TimeSeries> gen_var_process(const VarGenSpec& spec);

// Normal-equations solve via hand-rolled Gaussian elimination with partial
// pivoting: a deliberately separate code path from the production estimator,
// used as its cross-check on small instances.
std::vector<double> brute_force_ols(const std::vector<double>& y,
                                    const std::vector<std::vector<double>>& columns,
                                    bool intercept = true);

// Plateau-aware extrema by exhaustive per-index run expansion (quadratic),
// sharing no scanning logic with the production extrema finder.
ExtremaSet brute_force_extrema(const std::vector<double>& values);

}  // namespace emdec
