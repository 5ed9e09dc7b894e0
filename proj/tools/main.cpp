// Command-line driver: full pipeline runs plus single-shot shortcuts for
// decomposition, causality tracing, and synthetic data generation.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "emdec/analytics.hpp"
#include "emdec/causality.hpp"
#include "emdec/emd.hpp"
#include "emdec/errors.hpp"
#include "emdec/pipeline.hpp"
#include "emdec/series.hpp"
#include "emdec/synth.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;

fs::path default_out_dir() {
  if (const char* env = std::getenv("EMDEC_OUT_DIR"); env != nullptr && *env != '\0')
    return fs::path(env);
  return fs::path(".");
}

void report_files(const emdec::EmitResult& result, bool verbose) {
  if (verbose)
    for (const fs::path& p : result.files) std::cerr << "wrote " << p.string() << "\n";
  std::cout << result.files.size() << " files written to "
            << result.files.back().parent_path().string() << "\n";
}

int cmd_run(const std::string& config_path, const std::string& out_override,
            const std::string& stage, bool verbose) {
  emdec::PipelineConfig config = emdec::parse_pipeline_config(config_path);
  if (!out_override.empty()) config.output_dir = out_override;
  std::optional<emdec::Stage> through;
  if (!stage.empty()) through = emdec::stage_from_name(stage);
  if (verbose) std::cerr << "config ok: " << config.periods.size() << " period(s), "
                         << config.variables.size() << " variable(s)\n";
  const emdec::ReportBundle bundle = emdec::run_pipeline(config, through);
  if (verbose)
    for (const std::string& d : bundle.diagnostics) std::cerr << "note: " << d << "\n";
  report_files(emdec::emit_report(bundle), verbose);
  return 0;
}

int cmd_decompose(const std::string& csv_path, const std::string& column,
                  const std::string& out_dir, const std::string& period_column, double sd,
                  int max_sift, const std::string& boundary, bool svg, bool verbose) {
  emdec::TableSchema schema;
  schema.period_column = period_column;
  const emdec::SeriesTable table = emdec::parse_series_table_file(csv_path, schema);
  if (!table.has_column(column))
    throw emdec::DataError("column '" + column + "' not found in " + csv_path);

  emdec::SiftConfig sift;
  sift.sd_threshold = sd;
  sift.max_sift_iterations = max_sift;
  if (boundary == "clamp")
    sift.boundary = emdec::BoundaryPolicy::clamp;
  else if (boundary != "mirror")
    throw emdec::ConfigError("boundary must be 'mirror' or 'clamp'");

  emdec::ReportBundle bundle;
  bundle.config.output_dir = out_dir;
  bundle.config.formats = {"csv", "json"};
  if (svg) bundle.config.formats.insert("svg");
  bundle.config.variables = {column};

  emdec::DecompositionReport rep;
  rep.period = "all";
  rep.variable = column;
  rep.decomposition = emdec::decompose(table.column(column), sift);
  rep.modes = emdec::summarize_decomposition(rep.decomposition);
  const int k = static_cast<int>(rep.decomposition.imfs.size());
  rep.bands = emdec::aggregate_bands(rep.decomposition, emdec::BandMap::default_for(k));
  for (const std::string& w : rep.decomposition.diagnostics.warnings)
    bundle.diagnostics.push_back(w);

  std::cout << column << ": " << k << " modes, termination "
            << rep.decomposition.diagnostics.termination << "\n";
  bundle.decompositions.push_back(std::move(rep));
  report_files(emdec::emit_report(bundle), verbose);
  return 0;
}

int cmd_causality(const std::string& csv_path, const std::string& x_col, const std::string& y_col,
                  const std::string& out_dir, const std::string& period_column, int lag, int p_max,
                  int grid_points, const std::string& form, bool svg, bool verbose) {
  emdec::TableSchema schema;
  schema.period_column = period_column;
  const emdec::SeriesTable table = emdec::parse_series_table_file(csv_path, schema);
  for (const std::string& c : {x_col, y_col})
    if (!table.has_column(c)) throw emdec::DataError("column '" + c + "' not found in " + csv_path);

  const std::vector<double>& xv = table.column(x_col).values;
  const std::vector<double>& yv = table.column(y_col).values;
  const int p = lag > 0 ? lag : emdec::select_lag(xv, yv, p_max);
  emdec::GridSpec grid;
  grid.points = grid_points;
  const emdec::TestForm test_form =
      form == "f" ? emdec::TestForm::f_test : emdec::TestForm::chi_squared;
  if (form != "f" && form != "chi2")
    throw emdec::ConfigError("form must be 'chi2' or 'f', got '" + form + "'");

  emdec::ReportBundle bundle;
  bundle.config.output_dir = out_dir;
  bundle.config.formats = {"csv", "json"};
  if (svg) bundle.config.formats.insert("svg");

  emdec::CausalityReport rep;
  rep.period = "all";
  rep.cause = x_col;
  rep.effect = y_col;
  rep.forward = emdec::causality_spectrum(xv, yv, p, emdec::Direction::x_to_y, grid, test_form);
  rep.reverse = emdec::causality_spectrum(xv, yv, p, emdec::Direction::y_to_x, grid, test_form);
  rep.forward.cause = x_col;
  rep.forward.effect = y_col;
  rep.reverse.cause = y_col;
  rep.reverse.effect = x_col;

  for (const emdec::CausalitySpectrum* s : {&rep.forward, &rep.reverse}) {
    std::cout << s->cause << " -> " << s->effect << " (p = " << s->p
              << ", critical = " << s->critical << "): ";
    if (s->significant_bands.empty()) {
      std::cout << "no significant band\n";
    } else {
      for (std::size_t i = 0; i < s->significant_bands.size(); ++i) {
        const auto& b = s->significant_bands[i];
        const auto& c = s->cycle_bands[i];
        std::cout << (i ? ", " : "") << "omega [" << b.lo << ", " << b.hi << "] = cycles ["
                  << c.lo << ", " << c.hi << "]";
      }
      std::cout << "\n";
    }
    for (const std::string& note : s->notes) std::cout << "  note: " << note << "\n";
  }
  bundle.causality.push_back(std::move(rep));
  report_files(emdec::emit_report(bundle), verbose);
  return 0;
}

int cmd_synth(const std::string& spec_path, const std::string& out_dir, bool verbose) {
  std::ifstream in(spec_path, std::ios::binary);
  if (!in) throw emdec::ConfigError("cannot open spec '" + spec_path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw emdec::ConfigError(std::string("spec: invalid JSON: ") + e.what());
  }
  const std::string type = j.value("type", "");
  if (type != "tone_mix" && type != "var")
    throw emdec::ConfigError("spec: type must be 'tone_mix' or 'var'");

  emdec::SeriesTable table;
  std::string file_name;
  if (type == "tone_mix") {
    emdec::ToneMixSpec spec;
    spec.name = j.value("name", "synthetic");
    spec.length = j.value("length", 64);
    spec.seed = j.value("seed", 1ULL);
    spec.noise_sd = j.value("noise_sd", 0.0);
    if (j.contains("start")) spec.start = emdec::Period::parse(j["start"]);
    if (j.contains("trend")) spec.trend = j["trend"].get<std::vector<double>>();
    if (j.contains("tones"))
      for (const auto& t : j["tones"])
        spec.tones.push_back({t.value("frequency", 0.1), t.value("amplitude", 1.0),
                              t.value("phase", 0.0)});
    emdec::TimeSeries s = emdec::gen_tone_mix(spec);
    for (std::size_t i = 0; i < s.size(); ++i) table.index.push_back(s.period_at(i));
    file_name = spec.name + ".csv";
    table.add_column(std::move(s));
  } else {
    emdec::VarGenSpec spec;
    spec.p = j.value("p", 1);
    spec.length = j.value("length", 500);
    spec.burn_in = j.value("burn_in", 500);
    spec.seed = j.value("seed", 1ULL);
    if (j.contains("start")) spec.start = emdec::Period::parse(j["start"]);
    if (j.contains("intercepts")) {
      spec.intercepts(0) = j["intercepts"].at(0).get<double>();
      spec.intercepts(1) = j["intercepts"].at(1).get<double>();
    }
    if (j.contains("innovation_cov"))
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
          spec.innovation_cov(r, c) = j["innovation_cov"].at(r).at(c).get<double>();
    if (!j.contains("lag_coefs"))
      throw emdec::ConfigError("spec: var generator needs lag_coefs");
    for (const auto& block : j["lag_coefs"]) {
      Eigen::Matrix2d m;
      for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) m(r, c) = block.at(r).at(c).get<double>();
      spec.lag_coefs.push_back(m);
    }
    auto [sx, sy] = emdec::gen_var_process(spec);
    for (std::size_t i = 0; i < sx.size(); ++i) table.index.push_back(sx.period_at(i));
    file_name = "var_x_y.csv";
    table.add_column(std::move(sx));
    table.add_column(std::move(sy));
  }

  fs::create_directories(out_dir);
  const fs::path path = fs::path(out_dir) / file_name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw emdec::DataError("cannot write '" + path.string() + "'");
  emdec::emit_series_table(table, out);
  if (verbose) std::cerr << "wrote " << path.string() << "\n";
  std::cout << "1 files written to " << out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EMD-based multi-scale time-series analysis"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Report per-file and per-stage progress");

  std::string config_path, run_out, run_stage;
  CLI::App* run = app.add_subcommand("run", "Execute a full pipeline from a config file");
  run->add_option("config", config_path, "Pipeline config (JSON)")->required();
  run->add_option("--out", run_out, "Override the configured output directory");
  run->add_option("--stage", run_stage,
                  "Stop after this stage (transform|slice|decompose|summarize|regress|causality)");

  std::string dec_csv, dec_col, dec_out = default_out_dir().string();
  std::string dec_period_col = "date", dec_boundary = "mirror";
  double dec_sd = 0.25;
  int dec_max_sift = 100;
  bool dec_svg = false;
  CLI::App* dec = app.add_subcommand("decompose", "Decompose one CSV column into modes");
  dec->add_option("csv", dec_csv, "Input CSV")->required();
  dec->add_option("column", dec_col, "Column to decompose")->required();
  dec->add_option("--out", dec_out, "Output directory");
  dec->add_option("--period-column", dec_period_col, "Period label column (default 'date')");
  dec->add_option("--sd", dec_sd, "Sifting stop threshold");
  dec->add_option("--max-sift", dec_max_sift, "Sifting iteration cap");
  dec->add_option("--boundary", dec_boundary, "Envelope boundary policy: mirror|clamp");
  dec->add_flag("--svg", dec_svg, "Also render the mode stack as SVG");

  std::string cz_csv, cz_x, cz_y, cz_out = default_out_dir().string();
  std::string cz_period_col = "date", cz_form = "chi2";
  int cz_lag = 0, cz_pmax = 8, cz_grid = 99;
  bool cz_svg = false;
  CLI::App* cz = app.add_subcommand("causality", "Frequency-wise causality test for two columns");
  cz->add_option("csv", cz_csv, "Input CSV")->required();
  cz->add_option("x", cz_x, "Candidate cause column")->required();
  cz->add_option("y", cz_y, "Candidate effect column")->required();
  cz->add_option("--out", cz_out, "Output directory");
  cz->add_option("--period-column", cz_period_col, "Period label column (default 'date')");
  cz->add_option("--lag", cz_lag, "VAR lag order (0 = choose by information criterion)");
  cz->add_option("--p-max", cz_pmax, "Lag search bound when --lag 0");
  cz->add_option("--grid", cz_grid, "Frequency grid points");
  cz->add_option("--form", cz_form, "Test form: chi2|f");
  cz->add_flag("--svg", cz_svg, "Also render the spectra as SVG");

  std::string sy_spec, sy_out = default_out_dir().string();
  CLI::App* sy = app.add_subcommand("synth", "Generate a synthetic series from a spec file");
  sy->add_option("spec", sy_spec, "Generator spec (JSON)")->required();
  sy->add_option("--out", sy_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // help/version exit cleanly; usage errors are config errors
  }

  try {
    if (*run) return cmd_run(config_path, run_out, run_stage, verbose);
    if (*dec)
      return cmd_decompose(dec_csv, dec_col, dec_out, dec_period_col, dec_sd, dec_max_sift,
                           dec_boundary, dec_svg, verbose);
    if (*cz)
      return cmd_causality(cz_csv, cz_x, cz_y, cz_out, cz_period_col, cz_lag, cz_pmax, cz_grid,
                           cz_form, cz_svg, verbose);
    if (*sy) return cmd_synth(sy_spec, sy_out, verbose);
  } catch (const emdec::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const emdec::DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
