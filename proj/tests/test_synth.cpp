#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <emdec/emd.hpp>
#include <emdec/errors.hpp>
#include <emdec/synth.hpp>

#include <Eigen/Dense>
#include <cmath>
#include <numbers>
#include <vector>

using namespace emdec;

TEST_CASE("seeded uniform stream is deterministic and in range") {
  Rng a(12345), b(12345), c(54321);
  bool all_equal = true;
  bool any_differs = false;
  for (int i = 0; i < 1000; ++i) {
    const double ua = a.next_unit();
    const double ub = b.next_unit();
    const double uc = c.next_unit();
    if (ua != ub) all_equal = false;
    if (ua != uc) any_differs = true;
    CHECK(ua >= 0.0);
    CHECK(ua < 1.0);
  }
  CHECK(all_equal);
  CHECK(any_differs);
}

TEST_CASE("gaussian stream has the right first two moments") {
  Rng rng(777);
  const int n = 100000;
  double sum = 0.0, sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double g = rng.next_gaussian();
    sum += g;
    sum2 += g * g;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  CHECK(std::abs(mean) < 0.02);
  CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("a noiseless tone mix is the exact sinusoid formula") {
  ToneMixSpec spec;
  spec.tones = {{0.1, 2.0, 0.7}};
  spec.length = 32;
  const TimeSeries s = gen_tone_mix(spec);
  REQUIRE(s.values.size() == 32);
  CHECK(s.name == "synthetic");
  for (int t = 0; t < 32; ++t) {
    const double expected = 2.0 * std::sin(2.0 * std::numbers::pi * 0.1 * t + 0.7);
    CHECK(s.values[t] == expected);  // same formula, same doubles
  }
}

TEST_CASE("the trend polynomial uses the constant-first convention") {
  ToneMixSpec spec;
  spec.trend = {3.0, 0.5, 0.25};  // 3 + 0.5 t + 0.25 t^2
  spec.length = 10;
  const TimeSeries s = gen_tone_mix(spec);
  for (int t = 0; t < 10; ++t)
    CHECK(s.values[t] == doctest::Approx(3.0 + 0.5 * t + 0.25 * t * t).epsilon(1e-14));
}

TEST_CASE("equal seeds reproduce the noise bitwise; different seeds do not") {
  ToneMixSpec spec;
  spec.tones = {{0.2, 1.0, 0.0}};
  spec.noise_sd = 0.5;
  spec.length = 64;
  spec.seed = 9;
  const TimeSeries a = gen_tone_mix(spec);
  const TimeSeries b = gen_tone_mix(spec);
  CHECK(a.values == b.values);
  spec.seed = 10;
  const TimeSeries c = gen_tone_mix(spec);
  CHECK(a.values != c.values);
}

TEST_CASE("tone mix validation") {
  ToneMixSpec spec;
  spec.length = 7;
  CHECK_THROWS_AS(gen_tone_mix(spec), ConfigError);
  spec.length = 64;
  spec.tones = {{0.5, 1.0, 0.0}};
  CHECK_THROWS_AS(gen_tone_mix(spec), ConfigError);
  spec.tones = {{0.0, 1.0, 0.0}};
  CHECK_THROWS_AS(gen_tone_mix(spec), ConfigError);
  spec.tones = {{-0.1, 1.0, 0.0}};
  CHECK_THROWS_AS(gen_tone_mix(spec), ConfigError);
  spec.tones = {{0.49, 1.0, 0.0}};
  CHECK_NOTHROW(gen_tone_mix(spec));
}

TEST_CASE("the var generator is seeded and stationary") {
  VarGenSpec spec;
  spec.p = 1;
  Eigen::Matrix2d A;
  A << 0.5, 0.2, 0.1, 0.3;
  spec.lag_coefs = {A};
  spec.length = 400;
  spec.seed = 31;
  const auto [x1, y1] = gen_var_process(spec);
  const auto [x2, y2] = gen_var_process(spec);
  CHECK(x1.values == x2.values);
  CHECK(y1.values == y2.values);
  REQUIRE(x1.values.size() == 400);
  CHECK(x1.name == "x");
  CHECK(y1.name == "y");

  // stationarity in practice: sample mean near zero, bounded magnitude
  double mx = 0.0;
  for (double v : x1.values) mx += v;
  mx /= 400.0;
  CHECK(std::abs(mx) < 0.5);
}

TEST_CASE("independent innovations give nearly uncorrelated series under zero coefficients") {
  VarGenSpec spec;
  spec.p = 1;
  spec.lag_coefs = {Eigen::Matrix2d::Zero()};
  spec.length = 2000;
  spec.seed = 8;
  const auto [xs, ys] = gen_var_process(spec);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < 2000; ++i) {
    sxy += xs.values[i] * ys.values[i];
    sxx += xs.values[i] * xs.values[i];
    syy += ys.values[i] * ys.values[i];
  }
  CHECK(std::abs(sxy / std::sqrt(sxx * syy)) < 0.1);
}

TEST_CASE("a correlated innovation covariance shapes the sample moments") {
  VarGenSpec spec;
  spec.p = 1;
  spec.lag_coefs = {Eigen::Matrix2d::Zero()};
  spec.innovation_cov << 1.0, 0.6, 0.6, 1.0;
  spec.length = 5000;
  spec.seed = 15;
  const auto [xs, ys] = gen_var_process(spec);
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (int i = 0; i < 5000; ++i) {
    sxy += xs.values[i] * ys.values[i];
    sxx += xs.values[i] * xs.values[i];
    syy += ys.values[i] * ys.values[i];
  }
  CHECK(sxy / std::sqrt(sxx * syy) == doctest::Approx(0.6).epsilon(0.1));
}

TEST_CASE("var generator validation") {
  VarGenSpec spec;
  spec.p = 2;
  spec.lag_coefs = {Eigen::Matrix2d::Zero()};  // one block for p = 2
  CHECK_THROWS_AS(gen_var_process(spec), ConfigError);

  spec.p = 1;
  Eigen::Matrix2d unit;
  unit << 1.01, 0.0, 0.0, 0.5;
  spec.lag_coefs = {unit};
  CHECK_THROWS_AS(gen_var_process(spec), ConfigError);  // explosive

  spec.lag_coefs = {Eigen::Matrix2d::Zero()};
  spec.burn_in = 99;
  CHECK_THROWS_AS(gen_var_process(spec), ConfigError);
  spec.burn_in = 100;
  CHECK_NOTHROW(gen_var_process(spec));

  spec.innovation_cov << 1.0, 2.0, 2.0, 1.0;  // not positive definite
  CHECK_THROWS_AS(gen_var_process(spec), ConfigError);
  spec.innovation_cov << 1.0, 0.3, 0.2, 1.0;  // asymmetric
  CHECK_THROWS_AS(gen_var_process(spec), ConfigError);
}

TEST_CASE("the oracle estimator inverts an identity design") {
  const std::vector<double> y{3.0, -1.0, 2.5, 0.5, 4.0};
  std::vector<std::vector<double>> cols(4, std::vector<double>(5, 0.0));
  for (int j = 0; j < 4; ++j) cols[j][j] = 1.0;
  // no intercept: b_j = y_j for the first four, last row unexplained
  const std::vector<double> b = brute_force_ols(y, cols, false);
  REQUIRE(b.size() == 4);
  for (int j = 0; j < 4; ++j) CHECK(b[j] == doctest::Approx(y[j]).epsilon(1e-12));
}

TEST_CASE("the oracle estimator matches hand-computed simple regression") {
  // y on x with intercept: slope = cov/var computed by hand
  const std::vector<double> x{1, 2, 3, 4};
  const std::vector<double> y{1.1, 1.9, 3.1, 3.9};
  const std::vector<double> b = brute_force_ols(y, {x}, true);
  REQUIRE(b.size() == 2);
  // slope = sum((x-mx)(y-my)) / sum((x-mx)^2) = 4.8 / 5
  CHECK(b[1] == doctest::Approx(0.96).epsilon(1e-12));
  CHECK(b[0] == doctest::Approx(2.5 - 0.96 * 2.5).epsilon(1e-12));
}

TEST_CASE("the oracle estimator scales inversely with its design") {
  Rng rng(5);
  const int n = 12;
  std::vector<double> y(n), x(n);
  for (int i = 0; i < n; ++i) {
    x[i] = rng.next_gaussian();
    y[i] = 2.0 * x[i] + 0.1 * rng.next_gaussian();
  }
  const std::vector<double> base = brute_force_ols(y, {x}, true);
  std::vector<double> xs = x;
  for (double& v : xs) v *= 10.0;
  const std::vector<double> scaled = brute_force_ols(y, {xs}, true);
  CHECK(scaled[1] == doctest::Approx(base[1] / 10.0).epsilon(1e-10));
}

TEST_CASE("the oracle estimator rejects singular designs") {
  const std::vector<double> y{1, 2, 3, 4, 5};
  const std::vector<double> x{1, 2, 3, 4, 5};
  CHECK_THROWS_AS(brute_force_ols(y, {x, x}, true), NumericError);
  CHECK_THROWS_AS(brute_force_ols(y, {{1, 2, 3}}, true), DataError);    // length mismatch
  CHECK_THROWS_AS(brute_force_ols({1, 2}, {{1, 2}}, true), DataError);  // n <= k
}

TEST_CASE("oracle extrema on the alternating sign pattern") {
  // length 9 starting at -1: peaks at the +1 samples, troughs at the interior -1s
  std::vector<double> v(9);
  for (int i = 0; i < 9; ++i) v[i] = i % 2 == 0 ? -1.0 : 1.0;
  const ExtremaSet ex = brute_force_extrema(v);
  CHECK(ex.maxima == std::vector<int>{1, 3, 5, 7});
  CHECK(ex.minima == std::vector<int>{2, 4, 6});
}

TEST_CASE("oracle extrema handles plateaus like the production finder") {
  CHECK(brute_force_extrema({0, 2, 2, 2, 0}).maxima == std::vector<int>{2});
  CHECK(brute_force_extrema({0, 2, 2, 0}).maxima == std::vector<int>{1});
  CHECK(brute_force_extrema({1, 2, 3, 4, 5}).maxima.empty());
  CHECK(brute_force_extrema({2, 2, 0, 2, 2}).minima == std::vector<int>{2});
  CHECK_THROWS_AS(brute_force_extrema({1, 2}), DataError);
}

TEST_CASE("both extrema routes agree on tie-heavy random sequences") {
  Rng rng(2718);
  for (int rep = 0; rep < 1000; ++rep) {
    const int n = 3 + static_cast<int>(rng.next_unit() * 30);
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
      v[i] = std::floor(rng.next_unit() * 4.0);  // few levels force plateaus
    const ExtremaSet fast = find_local_extrema(v);
    const ExtremaSet slow = brute_force_extrema(v);
    CHECK(fast.maxima == slow.maxima);
    CHECK(fast.minima == slow.minima);
  }
}
