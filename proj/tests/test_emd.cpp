#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <emdec/emd.hpp>
#include <emdec/errors.hpp>
#include <emdec/spline.hpp>
#include <emdec/synth.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

using namespace emdec;

namespace {

TimeSeries make_series(std::vector<double> values) {
  TimeSeries s;
  s.name = "s";
  s.start = Period{2000, 1};
  s.values = std::move(values);
  return s;
}

std::vector<double> sine(int n, double freq, double amp = 1.0, double phase = 0.0) {
  std::vector<double> v(n);
  for (int t = 0; t < n; ++t) v[t] = amp * std::sin(2.0 * std::numbers::pi * freq * t + phase);
  return v;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b, int skip) {
  const int n = static_cast<int>(a.size());
  double ma = 0, mb = 0;
  int cnt = 0;
  for (int i = skip; i < n - skip; ++i) {
    ma += a[i];
    mb += b[i];
    ++cnt;
  }
  ma /= cnt;
  mb /= cnt;
  double sab = 0, saa = 0, sbb = 0;
  for (int i = skip; i < n - skip; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

TEST_CASE("two-knot spline degenerates to a straight line") {
  const CubicSpline s({0.0, 4.0}, {0.0, 4.0});
  for (int t = 0; t <= 4; ++t) CHECK(s(t) == doctest::Approx(t).epsilon(1e-12));
  CHECK(s(2.5) == doctest::Approx(2.5));
}

TEST_CASE("natural spline value frozen from an independent tridiagonal solve") {
  // Knots (0,0), (2,1), (4,0). Natural end conditions give interior second
  // derivative m1 = -3/4 and the cubic on [0,2] evaluates to 0.6875 at t=1.
  const CubicSpline s({0.0, 2.0, 4.0}, {0.0, 1.0, 0.0});
  CHECK(s(1.0) == doctest::Approx(0.6875).epsilon(1e-12));
  CHECK(s(2.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s(3.0) == doctest::Approx(0.6875).epsilon(1e-12));  // symmetry
  CHECK(s(0.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("spline interpolates every knot exactly") {
  const std::vector<double> x{0, 1, 3, 6, 7, 10};
  const std::vector<double> y{1.0, -2.0, 0.5, 4.0, 4.0, -1.0};
  const CubicSpline s(x, y);
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(s(x[i]) == doctest::Approx(y[i]).epsilon(1e-12));
}

TEST_CASE("spline rejects degenerate knot sets") {
  CHECK_THROWS_AS(CubicSpline({1.0}, {2.0}), EnvelopeError);
  CHECK_THROWS_AS(CubicSpline({0.0, 0.0}, {1.0, 2.0}), EnvelopeError);
  CHECK_THROWS_AS(CubicSpline({0.0, 2.0, 1.0}, {1.0, 2.0, 3.0}), EnvelopeError);
  CHECK_THROWS_AS(CubicSpline({0.0, 1.0}, {1.0}), EnvelopeError);
}

TEST_CASE("interior extrema with strict neighbors") {
  const ExtremaSet ex = find_local_extrema({1, 3, 2, 4, 1});
  CHECK(ex.maxima == std::vector<int>{1, 3});
  CHECK(ex.minima == std::vector<int>{2});
}

TEST_CASE("monotone input has no interior extrema") {
  const ExtremaSet ex = find_local_extrema({1, 2, 3, 4, 5});
  CHECK(ex.maxima.empty());
  CHECK(ex.minima.empty());
}

TEST_CASE("plateau counts once at its midpoint") {
  SUBCASE("odd-length plateau") {
    const ExtremaSet ex = find_local_extrema({0, 2, 2, 2, 0});
    CHECK(ex.maxima == std::vector<int>{2});
    CHECK(ex.minima.empty());
  }
  SUBCASE("even-length plateau rounds the midpoint down") {
    const ExtremaSet ex = find_local_extrema({0, 2, 2, 0});
    CHECK(ex.maxima == std::vector<int>{1});
  }
  SUBCASE("plateau minimum") {
    const ExtremaSet ex = find_local_extrema({3, 1, 1, 1, 3});
    CHECK(ex.minima == std::vector<int>{2});
  }
  SUBCASE("plateau touching an endpoint is not an extremum") {
    const ExtremaSet ex = find_local_extrema({2, 2, 0, 2, 2});
    CHECK(ex.maxima.empty());
    CHECK(ex.minima == std::vector<int>{2});
  }
}

TEST_CASE("endpoints are never extrema") {
  const ExtremaSet ex = find_local_extrema({5, 1, 5});
  CHECK(ex.maxima.empty());
  CHECK(ex.minima == std::vector<int>{1});
}

TEST_CASE("extrema need at least three samples") {
  CHECK_THROWS_AS(find_local_extrema({1, 2}), DataError);
}

TEST_CASE("mean envelope of a symmetric oscillation stays near zero") {
  const std::vector<double> v = sine(256, 8.0 / 256.0);
  SiftConfig cfg;

  // Mirrored extension reproduces the symmetric extrema pattern, so the
  // envelope mean is clean right up to half a cycle from the edges.
  cfg.boundary = BoundaryPolicy::mirror;
  std::vector<double> m = mean_envelope(v, cfg);
  REQUIRE(m.size() == v.size());
  double worst = 0.0;
  for (int i = 16; i < 240; ++i) worst = std::max(worst, std::abs(m[i]));
  CHECK(worst < 0.05);

  // Clamping anchors the spline at the raw endpoint values, which drags the
  // envelopes toward zero near the boundaries; the distortion fades roughly
  // two cycles in (period 32 here).
  cfg.boundary = BoundaryPolicy::clamp;
  m = mean_envelope(v, cfg);
  REQUIRE(m.size() == v.size());
  worst = 0.0;
  for (int i = 64; i < 192; ++i) worst = std::max(worst, std::abs(m[i]));
  CHECK(worst < 0.05);
}

TEST_CASE("mean envelope requires extrema on both sides") {
  SiftConfig cfg;
  CHECK_THROWS_AS(mean_envelope({1, 2, 3, 4, 5, 6, 7, 8}, cfg), EnvelopeError);
  // Single hump: maxima but no interior minima.
  CHECK_THROWS_AS(mean_envelope({0, 1, 2, 3, 2, 1, 0.5, 0.2}, cfg), EnvelopeError);
}

TEST_CASE("one sift removes a constant offset from a sinusoid") {
  std::vector<double> v = sine(256, 8.0 / 256.0);
  for (double& x : v) x += 2.0;
  SiftConfig cfg;
  const std::vector<double> h = sift_once(v, cfg);
  double worst = 0.0;
  for (int i = 16; i < 240; ++i) worst = std::max(worst, std::abs(h[i] - (v[i] - 2.0)));
  CHECK(worst < 0.1);
}

TEST_CASE("a pure sinusoid extracts as a single mode") {
  const std::vector<double> v = sine(256, 8.0 / 256.0);
  SiftConfig cfg;
  const ExtractResult r = extract_imf(v, cfg);
  REQUIRE(r.imf.has_value());
  CHECK(pearson(r.imf->values, v, 16) > 0.99);
  CHECK(imf_well_formed(r.imf->values));
  CHECK(r.imf->sift_iterations >= 1);
  // imf + residual reconstructs the input exactly
  for (std::size_t i = 0; i < v.size(); ++i)
    CHECK(r.imf->values[i] + r.residual[i] == doctest::Approx(v[i]).epsilon(1e-12));
}

TEST_CASE("extraction declines inputs that cannot form envelopes") {
  SiftConfig cfg;
  SUBCASE("straight line") {
    std::vector<double> line(32);
    for (int i = 0; i < 32; ++i) line[i] = 0.5 * i;
    const ExtractResult r = extract_imf(line, cfg);
    CHECK(!r.imf.has_value());
    CHECK(r.residual == line);
  }
  SUBCASE("single hump has one maximum only") {
    const std::vector<double> hump{0, 1, 4, 9, 4, 1, 0.5, 0.2};
    const ExtractResult r = extract_imf(hump, cfg);
    CHECK(!r.imf.has_value());
    CHECK(r.residual == hump);
  }
  SUBCASE("one maximum and one minimum are still too few") {
    const std::vector<double> wave{0, 2, 0, -2, 0, 0.5, 1.0, 1.5};
    const ExtremaSet ex = find_local_extrema(wave);
    REQUIRE(ex.maxima.size() == 1);
    REQUIRE(ex.minima.size() == 1);
    const ExtractResult r = extract_imf(wave, cfg);
    CHECK(!r.imf.has_value());
  }
}

TEST_CASE("monotone and trivial inputs are recognized") {
  CHECK(is_monotone_or_trivial({1, 2, 3}));
  CHECK(is_monotone_or_trivial({3, 2, 2, 1}));
  CHECK(is_monotone_or_trivial({5, 5, 5}));
  CHECK(!is_monotone_or_trivial({1, 3, 1, 3}));
  CHECK(is_monotone_or_trivial({1, 3, 2}));  // one extremum only
  CHECK(is_monotone_or_trivial({7}));
}

TEST_CASE("zero crossings ignore exact zeros") {
  CHECK(zero_crossings({1, -1, 1, -1}) == 3);
  CHECK(zero_crossings({1, 0, -1}) == 1);
  CHECK(zero_crossings({1, 0, 1}) == 0);
  CHECK(zero_crossings({0, 0, 0}) == 0);
  CHECK(zero_crossings({-2, 5}) == 1);
}

TEST_CASE("well-formedness compares extrema and zero-crossing counts") {
  CHECK(imf_well_formed(sine(64, 4.0 / 64.0)));
  std::vector<double> shifted = sine(64, 4.0 / 64.0);
  for (double& x : shifted) x += 2.0;  // extrema unchanged, crossings collapse
  CHECK(!imf_well_formed(shifted));
}

TEST_CASE("mode cap is the binary logarithm of the length") {
  CHECK(max_imf_count(8) == 3);
  CHECK(max_imf_count(255) == 7);
  CHECK(max_imf_count(256) == 8);
  CHECK(max_imf_count(257) == 8);
  CHECK(max_imf_count(1024) == 10);
}

TEST_CASE("decomposition validates input and config") {
  SiftConfig cfg;
  CHECK_THROWS_AS(decompose(make_series({1, 2, 3, 4, 5, 6, 7}), cfg), DataError);
  SiftConfig bad = cfg;
  bad.sd_threshold = 0.0;
  CHECK_THROWS_AS(decompose(make_series(sine(64, 0.1)), bad), ConfigError);
  bad = cfg;
  bad.max_sift_iterations = 0;
  CHECK_THROWS_AS(decompose(make_series(sine(64, 0.1)), bad), ConfigError);
}

TEST_CASE("constant series decomposes to residue only") {
  const Decomposition d = decompose(make_series(std::vector<double>(16, 3.5)));
  CHECK(d.imfs.empty());
  CHECK(d.residue == std::vector<double>(16, 3.5));
  CHECK(d.diagnostics.termination == "monotone");
}

TEST_CASE("trend plus oscillation separates into mode and residue") {
  std::vector<double> v = sine(128, 8.0 / 128.0);
  for (int i = 0; i < 128; ++i) v[i] += 0.05 * i;
  const Decomposition d = decompose(make_series(v));
  REQUIRE(!d.imfs.empty());
  CHECK(pearson(d.imfs[0].values, sine(128, 8.0 / 128.0), 8) > 0.95);
  // Residue carries the trend: strongly increasing overall.
  CHECK(d.residue.back() - d.residue.front() > 3.0);
  // Reconstruction is exact by construction.
  for (int i = 0; i < 128; ++i) {
    double sum = d.residue[i];
    for (const Imf& imf : d.imfs) sum += imf.values[i];
    CHECK(sum == doctest::Approx(v[i]).epsilon(1e-10));
  }
}

TEST_CASE("two separated tones occupy the first two modes") {
  std::vector<double> fast = sine(512, 0.2);
  std::vector<double> slow = sine(512, 0.02);
  std::vector<double> v(512);
  for (int i = 0; i < 512; ++i) v[i] = fast[i] + slow[i];
  const Decomposition d = decompose(make_series(v));
  REQUIRE(d.imfs.size() >= 2);
  CHECK(pearson(d.imfs[0].values, fast, 16) > 0.95);
  double best = -1.0;
  for (std::size_t k = 1; k < d.imfs.size(); ++k)
    best = std::max(best, pearson(d.imfs[k].values, slow, 16));
  CHECK(best > 0.90);
}

TEST_CASE("mode count never exceeds the cap and termination is labeled") {
  Rng rng(42);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 64 + static_cast<int>(rng.next_unit() * 400);
    ToneMixSpec spec;
    spec.length = n;
    spec.seed = 100 + rep;
    spec.noise_sd = 0.5;
    spec.tones = {{0.3, 1.0, 0.0}, {0.05, 1.5, 1.0}};
    const TimeSeries s = gen_tone_mix(spec);
    const Decomposition d = decompose(s);
    CHECK(static_cast<int>(d.imfs.size()) <= max_imf_count(s.values.size()));
    CHECK((d.diagnostics.termination == "monotone" || d.diagnostics.termination == "envelope" ||
           d.diagnostics.termination == "cap"));
    if (d.diagnostics.termination == "cap") CHECK(d.diagnostics.cap_hit);
  }
}

TEST_CASE("every extracted mode satisfies the defining counts") {
  ToneMixSpec spec;
  spec.length = 300;
  spec.seed = 7;
  spec.noise_sd = 0.4;
  spec.tones = {{0.25, 1.0, 0.3}, {0.04, 2.0, 1.2}};
  spec.trend = {1.0, 0.01};
  const Decomposition d = decompose(gen_tone_mix(spec));
  REQUIRE(!d.imfs.empty());
  for (const Imf& imf : d.imfs) {
    CHECK(imf_well_formed(imf.values));
    CHECK(imf.sift_iterations <= d.config.max_sift_iterations);
  }
  for (std::size_t k = 0; k < d.imfs.size(); ++k)
    CHECK(d.imfs[k].index == static_cast<int>(k) + 1);
}

TEST_CASE("decomposition is deterministic") {
  ToneMixSpec spec;
  spec.length = 200;
  spec.seed = 11;
  spec.noise_sd = 0.3;
  spec.tones = {{0.2, 1.0, 0.0}};
  const TimeSeries s = gen_tone_mix(spec);
  const Decomposition a = decompose(s);
  const Decomposition b = decompose(s);
  REQUIRE(a.imfs.size() == b.imfs.size());
  for (std::size_t k = 0; k < a.imfs.size(); ++k) CHECK(a.imfs[k].values == b.imfs[k].values);
  CHECK(a.residue == b.residue);
}

TEST_CASE("boundary policies agree away from the ends") {
  const std::vector<double> v = sine(256, 10.0 / 256.0);
  SiftConfig mirror_cfg;
  SiftConfig clamp_cfg;
  clamp_cfg.boundary = BoundaryPolicy::clamp;
  const std::vector<double> em = mean_envelope(v, mirror_cfg);
  const std::vector<double> ec = mean_envelope(v, clamp_cfg);
  double worst = 0.0;
  for (int i = 64; i < 192; ++i) worst = std::max(worst, std::abs(em[i] - ec[i]));
  CHECK(worst < 0.05);
  CHECK(max_abs(em) < 2.0);
  CHECK(max_abs(ec) < 2.0);
}
