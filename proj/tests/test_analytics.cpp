#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <emdec/analytics.hpp>
#include <emdec/emd.hpp>
#include <emdec/errors.hpp>
#include <emdec/synth.hpp>

#include <cmath>
#include <numbers>
#include <vector>

using namespace emdec;

namespace {

std::vector<double> sine(int n, double freq, double amp = 1.0, double phase = 0.0) {
  std::vector<double> v(n);
  for (int t = 0; t < n; ++t) v[t] = amp * std::sin(2.0 * std::numbers::pi * freq * t + phase);
  return v;
}

Imf make_imf(std::vector<double> values, int index) {
  Imf imf;
  imf.values = std::move(values);
  imf.index = index;
  return imf;
}

// A decomposition assembled by hand so component properties are exact.
Decomposition make_decomp(std::vector<std::vector<double>> imfs, std::vector<double> residue) {
  Decomposition d;
  const std::size_t n = residue.size();
  d.source.name = "src";
  d.source.start = Period{2000, 1};
  d.source.values.assign(n, 0.0);
  for (std::size_t i = 0; i < imfs.size(); ++i) {
    for (std::size_t t = 0; t < n; ++t) d.source.values[t] += imfs[i][t];
    d.imfs.push_back(make_imf(std::move(imfs[i]), static_cast<int>(i) + 1));
  }
  for (std::size_t t = 0; t < n; ++t) d.source.values[t] += residue[t];
  d.residue = std::move(residue);
  return d;
}

}  // namespace

TEST_CASE("mean period divides length by the number of peaks") {
  // 20 samples, peaks at t = 1, 5, 9, 13, 17: five maxima.
  std::vector<double> v(20);
  for (int t = 0; t < 20; ++t) v[t] = std::sin(std::numbers::pi * t / 2.0);
  REQUIRE(find_local_extrema(v).maxima.size() == 5);
  CHECK(mean_period(v) == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("mean period of a peakless series is infinite") {
  CHECK(std::isinf(mean_period({1, 2, 3, 4, 5})));
  CHECK(std::isinf(mean_period({5, 3, 1, 1, 1})));
  CHECK_THROWS_AS(mean_period({1, 2}), DataError);
}

TEST_CASE("pearson correlation on a crossed ranking") {
  const CorrResult r = pearson_corr({1, 2, 3, 4}, {2, 1, 4, 3});
  CHECK(r.value == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(r.p > 0.0);
  CHECK(r.p < 1.0);
}

TEST_CASE("pearson correlation is exact on identical and opposite series") {
  const std::vector<double> x{1.0, 2.5, -3.0, 4.0, 0.5};
  std::vector<double> neg = x;
  for (double& v : neg) v = -v;
  CHECK(pearson_corr(x, x).value == doctest::Approx(1.0));
  CHECK(pearson_corr(x, x).p == doctest::Approx(0.0));
  CHECK(pearson_corr(x, neg).value == doctest::Approx(-1.0));
}

TEST_CASE("pearson correlation is invariant under affine maps") {
  const std::vector<double> x{0.3, -1.2, 2.2, 0.9, -0.4, 1.1};
  const std::vector<double> y{1.0, 0.2, 2.9, 1.4, 0.1, 2.0};
  const CorrResult base = pearson_corr(x, y);
  std::vector<double> scaled = y;
  for (double& v : scaled) v = 3.5 * v - 7.0;
  const CorrResult same = pearson_corr(x, scaled);
  CHECK(same.value == doctest::Approx(base.value).epsilon(1e-12));
  CHECK(same.p == doctest::Approx(base.p).epsilon(1e-12));
}

TEST_CASE("pearson rejects degenerate input") {
  CHECK_THROWS_AS(pearson_corr({1, 1, 1}, {1, 2, 3}), DataError);
  CHECK_THROWS_AS(pearson_corr({1, 2}, {1, 2}), DataError);
  CHECK_THROWS_AS(pearson_corr({1, 2, 3}, {1, 2}), DataError);
}

TEST_CASE("kendall tau counts concordant pairs") {
  // Pairs: (1,2) concordant, (1,3) concordant, (2,3) discordant: (2-1)/3.
  const CorrResult k = kendall_tau({1, 2, 3}, {1, 3, 2});
  CHECK(k.value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(kendall_tau({1, 2, 3, 4}, {1, 2, 3, 4}).value == doctest::Approx(1.0));
  CHECK(kendall_tau({1, 2, 3, 4}, {4, 3, 2, 1}).value == doctest::Approx(-1.0));
}

TEST_CASE("kendall tau is invariant under strictly monotone transforms") {
  const std::vector<double> x{0.3, -1.2, 2.2, 0.9, -0.4, 1.1, 0.0};
  const std::vector<double> y{1.0, 0.2, 2.9, 1.4, 0.1, 2.0, 0.6};
  const CorrResult base = kendall_tau(x, y);
  std::vector<double> warped = y;
  for (double& v : warped) v = std::exp(3.0 * v);
  const CorrResult same = kendall_tau(x, warped);
  CHECK(same.value == doctest::Approx(base.value).epsilon(1e-14));
  CHECK(same.p == doctest::Approx(base.p).epsilon(1e-14));
}

TEST_CASE("kendall tau corrects for ties in either margin") {
  // x has a tied pair; tau-b uses sqrt((n0 - Tx)(n0 - Ty)) in the denominator.
  const CorrResult k = kendall_tau({1, 1, 2, 3}, {1, 2, 3, 4});
  // S = 5 concordant - 0 discordant among the 5 untied pairs; n0 = 6, Tx = 1.
  CHECK(k.value == doctest::Approx(5.0 / std::sqrt(5.0 * 6.0)).epsilon(1e-12));
  CHECK_THROWS_AS(kendall_tau({2, 2, 2}, {1, 2, 3}), DataError);
}

TEST_CASE("variance shares are component variances over their sum") {
  const int n = 64;
  const std::vector<double> a = sine(n, 4.0 / n);
  const std::vector<double> b = sine(n, 4.0 / n, 1.0, std::numbers::pi / 2.0);
  const Decomposition d = make_decomp({a, b}, std::vector<double>(n, 2.0));
  const std::vector<double> shares = variance_shares(d);
  REQUIRE(shares.size() == 3);
  CHECK(shares[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(shares[1] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(shares[2] == doctest::Approx(0.0));
  CHECK(shares[0] + shares[1] + shares[2] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("variance shares sum to one on a real decomposition") {
  ToneMixSpec spec;
  spec.length = 256;
  spec.seed = 5;
  spec.noise_sd = 0.3;
  spec.tones = {{0.22, 1.0, 0.4}, {0.03, 1.5, 2.0}};
  spec.trend = {0.5, 0.02};
  const Decomposition d = decompose(gen_tone_mix(spec));
  const std::vector<double> shares = variance_shares(d);
  REQUIRE(shares.size() == d.imfs.size() + 1);
  double total = 0.0;
  for (double s : shares) {
    CHECK(s >= 0.0);
    total += s;
  }
  CHECK(std::abs(total - 1.0) <= 1e-12);
}

TEST_CASE("the default band map splits seven modes 2-2-3") {
  const BandMap m = BandMap::default_for(7);
  CHECK(m.short_run == std::vector<int>{1, 2});
  CHECK(m.medium_run == std::vector<int>{3, 4});
  CHECK(m.long_run == std::vector<int>{5, 6, 7});
  CHECK(m.covers(7));
}

TEST_CASE("the default band map covers any mode count exactly once") {
  for (int k = 0; k <= 12; ++k) {
    const BandMap m = BandMap::default_for(k);
    CHECK(m.covers(k));
    CHECK(static_cast<int>(m.short_run.size() + m.medium_run.size() + m.long_run.size()) == k);
    if (k > 0) CHECK(!m.short_run.empty());
  }
  // Short group takes the ceiling third.
  CHECK(BandMap::default_for(5).short_run == std::vector<int>{1, 2});
  CHECK(BandMap::default_for(5).medium_run == std::vector<int>{3, 4});
  CHECK(BandMap::default_for(5).long_run == std::vector<int>{5});
  CHECK(BandMap::default_for(1).short_run == std::vector<int>{1});
  CHECK(BandMap::default_for(2).medium_run == std::vector<int>{2});
}

TEST_CASE("band coverage detects gaps, repeats, and out-of-range modes") {
  BandMap m;
  m.short_run = {1};
  m.medium_run = {2};
  m.long_run = {3};
  CHECK(m.covers(3));
  CHECK(!m.covers(4));  // gap: mode 4 unassigned
  m.long_run = {3, 3};
  CHECK(!m.covers(3));  // repeat
  m.long_run = {4};
  CHECK(!m.covers(3));  // out of range
}

TEST_CASE("band aggregation reassembles the source exactly") {
  const int n = 128;
  const std::vector<double> fast = sine(n, 0.25, 1.0);
  const std::vector<double> mid = sine(n, 0.08, 1.5, 0.7);
  const std::vector<double> slow = sine(n, 0.02, 2.0, 1.9);
  std::vector<double> trend(n);
  for (int t = 0; t < n; ++t) trend[t] = 5.0 + 0.03 * t;
  const Decomposition d = make_decomp({fast, mid, slow}, trend);

  const std::vector<BandSummary> bands = aggregate_bands(d, BandMap::default_for(3));
  REQUIRE(bands.size() == 3);
  CHECK(bands[0].band == "high-frequency");
  CHECK(bands[1].band == "low-frequency");
  CHECK(bands[2].band == "trend");
  // default for 3: short {1}, medium {2}, long {3}
  for (int t = 0; t < n; ++t) {
    CHECK(bands[0].series[t] == doctest::Approx(fast[t]));
    CHECK(bands[1].series[t] == doctest::Approx(mid[t] + slow[t]));
    CHECK(bands[2].series[t] == doctest::Approx(trend[t]));
    const double sum = bands[0].series[t] + bands[1].series[t] + bands[2].series[t];
    CHECK(sum == doctest::Approx(d.source.values[t]).epsilon(1e-12));
  }
  for (const BandSummary& b : bands) {
    CHECK(b.variance_share >= 0.0);
    CHECK(b.pearson_p >= 0.0);
  }
}

TEST_CASE("band aggregation rejects a map that misses modes") {
  const Decomposition d = make_decomp({sine(64, 0.2), sine(64, 0.05)}, std::vector<double>(64, 1.0));
  CHECK_THROWS_AS(aggregate_bands(d, BandMap::default_for(3)), ConfigError);
}

TEST_CASE("mode summaries carry one row per component") {
  ToneMixSpec spec;
  spec.length = 200;
  spec.seed = 9;
  spec.tones = {{0.2, 1.0, 0.0}, {0.04, 1.0, 0.5}};
  spec.trend = {0.0, 0.05};
  const Decomposition d = decompose(gen_tone_mix(spec));
  const std::vector<ImfSummary> rows = summarize_decomposition(d);
  REQUIRE(rows.size() == d.imfs.size() + 1);
  CHECK(rows.front().mode == "IMF1");
  CHECK(rows.back().mode == "residue");
  double total = 0.0;
  for (const ImfSummary& row : rows) {
    if (row.mode != "residue") {
      CHECK(row.pearson_p >= 0.0);
      CHECK(row.pearson_p <= 1.0);
      CHECK(row.kendall_p >= 0.0);
      CHECK(row.kendall_p <= 1.0);
    }
    total += row.variance_share;
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
  // Mean periods grow with the mode index for well-separated tones.
  CHECK(rows[0].mean_period < rows[1].mean_period);
}

TEST_CASE("summaries survive a constant residue") {
  const Decomposition d = make_decomp({sine(64, 0.2)}, std::vector<double>(64, 4.0));
  const std::vector<ImfSummary> rows = summarize_decomposition(d);
  REQUIRE(rows.size() == 2);
  CHECK(std::isinf(rows.back().mean_period));
  CHECK(std::isnan(rows.back().pearson_r));
  CHECK(std::isnan(rows.back().kendall_tau));
  CHECK(rows.back().variance_share == doctest::Approx(0.0));
}

TEST_CASE("significance stars follow the 1/5/10 percent thresholds") {
  CHECK(significance_stars(0.0009) == "***");
  CHECK(significance_stars(0.009) == "***");
  CHECK(significance_stars(0.01) == "**");
  CHECK(significance_stars(0.049) == "**");
  CHECK(significance_stars(0.05) == "*");
  CHECK(significance_stars(0.099) == "*");
  CHECK(significance_stars(0.10) == "");
  CHECK(significance_stars(0.9) == "");
}
