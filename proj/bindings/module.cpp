// Python bindings for the core operations: decomposition, mode summaries,
// per-scale regression, and the frequency-domain causality test.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "emdec/analytics.hpp"
#include "emdec/causality.hpp"
#include "emdec/emd.hpp"
#include "emdec/errors.hpp"
#include "emdec/pipeline.hpp"
#include "emdec/regression.hpp"
#include "emdec/series.hpp"
#include "emdec/synth.hpp"

namespace py = pybind11;

namespace {

emdec::SiftConfig make_sift(double sd_threshold, int max_sift_iterations,
                            const std::string& boundary) {
  emdec::SiftConfig c;
  c.sd_threshold = sd_threshold;
  c.max_sift_iterations = max_sift_iterations;
  if (boundary == "mirror")
    c.boundary = emdec::BoundaryPolicy::mirror;
  else if (boundary == "clamp")
    c.boundary = emdec::BoundaryPolicy::clamp;
  else
    throw emdec::ConfigError("boundary must be 'mirror' or 'clamp'");
  return c;
}

emdec::TimeSeries make_series(const std::vector<double>& values, const std::string& name) {
  emdec::TimeSeries s;
  s.name = name;
  s.start = {2000, 1};
  s.values = values;
  return s;
}

py::dict decomposition_dict(const emdec::Decomposition& d) {
  py::dict out;
  py::list imfs;
  for (const emdec::Imf& imf : d.imfs) imfs.append(imf.values);
  out["imfs"] = std::move(imfs);
  out["residue"] = d.residue;
  out["termination"] = d.diagnostics.termination;
  out["cap_hit"] = d.diagnostics.cap_hit;
  out["warnings"] = d.diagnostics.warnings;
  return out;
}

py::dict regression_dict(const emdec::RegressionResult& r) {
  py::dict out;
  out["names"] = r.names;
  out["coefficients"] = r.coefficients;
  out["t_stats"] = r.t_stats;
  out["p_values"] = r.p_values;
  out["n_obs"] = r.n_obs;
  if (!std::isnan(r.r_squared)) out["r_squared"] = r.r_squared;
  if (r.instrument_strength) {
    const emdec::InstrumentStrength& s = *r.instrument_strength;
    out["cragg_donald_f"] = s.cragg_donald_f;
    out["instruments"] = s.strong ? "strong" : (s.marginal ? "marginal" : "weak");
  }
  return out;
}

py::dict spectrum_dict(const emdec::CausalitySpectrum& s) {
  py::dict out;
  out["cause"] = s.cause;
  out["effect"] = s.effect;
  out["p"] = s.p;
  out["df"] = s.df;
  out["critical"] = s.critical;
  out["omega"] = s.omegas;
  out["statistic"] = s.statistics;
  py::list bands;
  for (std::size_t i = 0; i < s.significant_bands.size(); ++i) {
    py::dict b;
    b["omega_lo"] = s.significant_bands[i].lo;
    b["omega_hi"] = s.significant_bands[i].hi;
    b["cycle_lo"] = s.cycle_bands[i].lo;
    b["cycle_hi"] = s.cycle_bands[i].hi;
    bands.append(std::move(b));
  }
  out["significant_bands"] = std::move(bands);
  out["notes"] = s.notes;
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Mode decomposition, scale-wise regression, and frequency-domain causality";

  py::register_exception<emdec::ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<emdec::DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<emdec::NumericError>(m, "NumericError", PyExc_ArithmeticError);

  m.def(
      "decompose",
      [](const std::vector<double>& values, double sd_threshold, int max_sift_iterations,
         const std::string& boundary) {
        const emdec::Decomposition d = emdec::decompose(
            make_series(values, "series"), make_sift(sd_threshold, max_sift_iterations, boundary));
        return decomposition_dict(d);
      },
      py::arg("values"), py::arg("sd_threshold") = 0.25, py::arg("max_sift_iterations") = 100,
      py::arg("boundary") = "mirror",
      "Decompose a series into intrinsic modes plus a residue.");

  m.def(
      "summarize",
      [](const std::vector<double>& values, double sd_threshold, int max_sift_iterations,
         const std::string& boundary) {
        const emdec::Decomposition d = emdec::decompose(
            make_series(values, "series"), make_sift(sd_threshold, max_sift_iterations, boundary));
        py::list rows;
        for (const emdec::ImfSummary& r : emdec::summarize_decomposition(d)) {
          py::dict row;
          row["mode"] = r.mode;
          if (std::isinf(r.mean_period))
            row["mean_period"] = py::none();
          else
            row["mean_period"] = r.mean_period;
          row["pearson_r"] = r.pearson_r;
          row["pearson_p"] = r.pearson_p;
          row["kendall_tau"] = r.kendall_tau;
          row["kendall_p"] = r.kendall_p;
          row["variance_share"] = r.variance_share;
          rows.append(std::move(row));
        }
        return rows;
      },
      py::arg("values"), py::arg("sd_threshold") = 0.25, py::arg("max_sift_iterations") = 100,
      py::arg("boundary") = "mirror",
      "Decompose and summarize each mode against the source series.");

  m.def(
      "mean_period",
      [](const std::vector<double>& values) { return emdec::mean_period(values); },
      py::arg("values"), "Series length divided by the number of peaks (inf when no peaks).");

  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const emdec::CorrResult r = emdec::pearson_corr(x, y);
        return py::make_tuple(r.value, r.p);
      },
      py::arg("x"), py::arg("y"), "Pearson correlation with a two-tailed p-value.");

  m.def(
      "kendall",
      [](const std::vector<double>& x, const std::vector<double>& y) {
        const emdec::CorrResult r = emdec::kendall_tau(x, y);
        return py::make_tuple(r.value, r.p);
      },
      py::arg("x"), py::arg("y"), "Kendall tau-b with a two-tailed p-value.");

  m.def(
      "ols",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X, bool intercept,
         const std::vector<std::string>& names) {
        return regression_dict(emdec::ols(y, X, intercept, names));
      },
      py::arg("y"), py::arg("X"), py::arg("intercept") = true,
      py::arg("names") = std::vector<std::string>{},
      "Least squares with classical t-statistics.");

  m.def(
      "two_sls",
      [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X,
         const std::vector<int>& endogenous_cols, const Eigen::MatrixXd& Z, bool intercept,
         const std::vector<std::string>& names) {
        return regression_dict(emdec::two_sls(y, X, endogenous_cols, Z, intercept, names));
      },
      py::arg("y"), py::arg("X"), py::arg("endogenous_cols"), py::arg("Z"),
      py::arg("intercept") = true, py::arg("names") = std::vector<std::string>{},
      "Two-stage least squares with lagged-instrument support.");

  m.def(
      "causality_spectrum",
      [](const std::vector<double>& x, const std::vector<double>& y, int p,
         const std::string& direction, int grid_points, const std::string& form) {
        emdec::GridSpec grid;
        grid.points = grid_points;
        const emdec::Direction dir = direction == "y->x" ? emdec::Direction::y_to_x
                                                         : emdec::Direction::x_to_y;
        if (direction != "x->y" && direction != "y->x")
          throw emdec::ConfigError("direction must be 'x->y' or 'y->x'");
        const emdec::TestForm tf =
            form == "f" ? emdec::TestForm::f_test : emdec::TestForm::chi_squared;
        if (form != "f" && form != "chi2")
          throw emdec::ConfigError("form must be 'chi2' or 'f'");
        return spectrum_dict(emdec::causality_spectrum(x, y, p, dir, grid, tf));
      },
      py::arg("x"), py::arg("y"), py::arg("p"), py::arg("direction") = "x->y",
      py::arg("grid_points") = 99, py::arg("form") = "chi2",
      "Trace the frequency-wise causality statistic over (0, pi).");

  m.def("select_lag", &emdec::select_lag, py::arg("x"), py::arg("y"), py::arg("p_max") = 8,
        "Information-criterion lag choice for the bivariate VAR.");

  m.def("omega_to_cycle", &emdec::omega_to_cycle, py::arg("omega"),
        "Cycle length in observation periods, T = 2*pi/omega.");

  m.def(
      "gen_tone_mix",
      [](const std::vector<std::tuple<double, double, double>>& tones,
         const std::vector<double>& trend, double noise_sd, int length, std::uint64_t seed) {
        emdec::ToneMixSpec spec;
        for (const auto& [f, a, ph] : tones) spec.tones.push_back({f, a, ph});
        spec.trend = trend;
        spec.noise_sd = noise_sd;
        spec.length = length;
        spec.seed = seed;
        return emdec::gen_tone_mix(spec).values;
      },
      py::arg("tones"), py::arg("trend") = std::vector<double>{}, py::arg("noise_sd") = 0.0,
      py::arg("length") = 64, py::arg("seed") = 1,
      "Seeded sum of sinusoids plus polynomial trend plus Gaussian noise.");

  m.def(
      "run",
      [](const std::filesystem::path& config_path, const std::string& out_override) {
        emdec::PipelineConfig config = emdec::parse_pipeline_config(config_path);
        if (!out_override.empty()) config.output_dir = out_override;
        const emdec::ReportBundle bundle = emdec::run_pipeline(config);
        const emdec::EmitResult result = emdec::emit_report(bundle);
        std::vector<std::string> files;
        for (const auto& p : result.files) files.push_back(p.string());
        return files;
      },
      py::arg("config_path"), py::arg("out_dir") = std::string{},
      "Run a full pipeline config; returns the written file paths.");
}
