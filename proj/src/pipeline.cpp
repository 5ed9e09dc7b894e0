#include "emdec/pipeline.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace emdec {

using ordered_json = nlohmann::ordered_json;

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, v);
  return buf;
}

// ---------------------------------------------------------------- config --

const ordered_json& require(const ordered_json& j, const std::string& key,
                            const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) throw ConfigError("config: missing '" + key + "' in " + where);
  return *it;
}

std::string require_string(const ordered_json& j, const std::string& key,
                           const std::string& where) {
  const ordered_json& v = require(j, key, where);
  if (!v.is_string()) throw ConfigError("config: '" + key + "' in " + where + " must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const ordered_json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError("config: " + what + " must be an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) throw ConfigError("config: " + what + " must contain only strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Period parse_period_label(const std::string& label, const std::string& where) {
  try {
    return Period::parse(label);
  } catch (const DataError& e) {
    throw ConfigError("config: bad period '" + label + "' in " + where + ": " + e.what());
  }
}

std::vector<int> int_list(const ordered_json& v, const std::string& what) {
  if (!v.is_array()) throw ConfigError("config: " + what + " must be an array of mode indices");
  std::vector<int> out;
  for (const auto& e : v) {
    if (!e.is_number_integer()) throw ConfigError("config: " + what + " must contain integers");
    out.push_back(e.get<int>());
  }
  return out;
}

PipelineConfig parse_config_json(const ordered_json& j, const std::filesystem::path& base_dir,
                                 std::string raw_text) {
  PipelineConfig c;
  c.raw_text = std::move(raw_text);

  const ordered_json& input = require(j, "input", "config");
  std::filesystem::path in_path = require_string(input, "path", "input");
  c.input_path = in_path.is_absolute() ? in_path : base_dir / in_path;
  if (input.contains("period_column")) c.schema.period_column = input["period_column"];
  if (input.contains("delimiter")) {
    const std::string d = input["delimiter"];
    if (d.size() != 1) throw ConfigError("config: delimiter must be a single character");
    c.schema.delimiter = d[0];
  }
  if (input.contains("columns")) c.schema.columns = string_list(input["columns"], "input.columns");

  // names available to later sections: declared/implicit input columns plus
  // transform outputs
  std::vector<std::string> known = c.schema.columns;
  const bool schema_open = known.empty();  // header-defined; defer strict checks

  if (j.contains("transforms")) {
    if (!j["transforms"].is_array()) throw ConfigError("config: transforms must be an array");
    for (const auto& t : j["transforms"]) {
      TransformDirective d;
      d.op = require_string(t, "op", "transform");
      if (d.op != "log" && d.op != "per_capita")
        throw ConfigError("config: unknown transform op '" + d.op + "'");
      d.columns = string_list(require(t, "columns", "transform"), "transform columns");
      if (d.columns.empty()) throw ConfigError("config: transform with no columns");
      if (d.op == "per_capita") {
        d.population = require_string(t, "population", "per_capita transform");
        if (!schema_open &&
            std::find(known.begin(), known.end(), d.population) == known.end())
          throw ConfigError("config: per_capita population column '" + d.population +
                            "' is not a known column");
      }
      for (const std::string& col : d.columns) {
        if (!schema_open && std::find(known.begin(), known.end(), col) == known.end())
          throw ConfigError("config: transform references missing column '" + col + "'");
        known.push_back(col + (d.op == "log" ? "_log" : "_pc"));
      }
      c.transforms.push_back(std::move(d));
    }
  }

  c.variables = string_list(require(j, "variables", "config"), "variables");
  if (c.variables.empty()) throw ConfigError("config: at least one variable is required");
  for (const std::string& v : c.variables)
    if (!schema_open && std::find(known.begin(), known.end(), v) == known.end())
      throw ConfigError("config: variable '" + v + "' is not a known column");

  const ordered_json& periods = require(j, "periods", "config");
  if (!periods.is_object() || periods.empty())
    throw ConfigError("config: periods must be a non-empty object of {start, end}");
  for (auto it = periods.begin(); it != periods.end(); ++it) {
    PeriodWindow w;
    w.start = parse_period_label(require_string(*it, "start", "period '" + it.key() + "'"),
                                 "period '" + it.key() + "'");
    w.end = parse_period_label(require_string(*it, "end", "period '" + it.key() + "'"),
                               "period '" + it.key() + "'");
    if (w.end < w.start)
      throw ConfigError("config: period '" + it.key() + "' ends before it starts");
    c.periods.emplace_back(it.key(), w);
  }

  if (j.contains("sift")) {
    const ordered_json& s = j["sift"];
    if (s.contains("sd_threshold")) c.sift.sd_threshold = s["sd_threshold"].get<double>();
    if (s.contains("max_sift_iterations"))
      c.sift.max_sift_iterations = s["max_sift_iterations"].get<int>();
    if (s.contains("boundary")) {
      const std::string b = s["boundary"];
      if (b == "mirror")
        c.sift.boundary = BoundaryPolicy::mirror;
      else if (b == "clamp")
        c.sift.boundary = BoundaryPolicy::clamp;
      else
        throw ConfigError("config: boundary must be 'mirror' or 'clamp', got '" + b + "'");
    }
    if (!(c.sift.sd_threshold > 0.0)) throw ConfigError("config: sd_threshold must be positive");
    if (c.sift.max_sift_iterations < 1)
      throw ConfigError("config: max_sift_iterations must be >= 1");
  }

  if (j.contains("bands") && !(j["bands"].is_string() && j["bands"] == "auto")) {
    const ordered_json& b = j["bands"];
    BandMap m;
    m.short_run = int_list(require(b, "short", "bands"), "bands.short");
    m.medium_run = int_list(require(b, "medium", "bands"), "bands.medium");
    m.long_run = int_list(require(b, "long", "bands"), "bands.long");
    c.bands = std::move(m);
  }

  if (j.contains("regressions")) {
    if (!j["regressions"].is_array()) throw ConfigError("config: regressions must be an array");
    for (const auto& r : j["regressions"]) {
      RegressionSpec spec;
      spec.name = require_string(r, "name", "regression");
      spec.dependent = require_string(r, "dependent", "regression '" + spec.name + "'");
      spec.regressors = string_list(require(r, "regressors", "regression '" + spec.name + "'"),
                                    "regressors of '" + spec.name + "'");
      if (r.contains("intercept")) spec.intercept = r["intercept"].get<bool>();
      if (r.contains("estimator")) {
        const std::string e = r["estimator"];
        if (e == "ols")
          spec.estimator = Estimator::ols;
        else if (e == "tsls" || e == "2sls")
          spec.estimator = Estimator::tsls;
        else
          throw ConfigError("config: estimator must be 'ols' or 'tsls', got '" + e + "'");
      }
      if (r.contains("endogenous"))
        spec.endogenous = string_list(r["endogenous"], "endogenous of '" + spec.name + "'");
      if (r.contains("instrument_lags")) spec.instrument_lags = r["instrument_lags"].get<int>();
      if (spec.estimator == Estimator::tsls && spec.instrument_lags < 1)
        throw ConfigError("config: instrument_lags must be >= 1 in '" + spec.name + "'");

      auto in_variables = [&](const std::string& v) {
        return std::find(c.variables.begin(), c.variables.end(), v) != c.variables.end();
      };
      if (!in_variables(spec.dependent))
        throw ConfigError("config: regression '" + spec.name + "' dependent '" + spec.dependent +
                          "' is not a decomposed variable");
      for (const std::string& v : spec.regressors)
        if (!in_variables(v))
          throw ConfigError("config: regression '" + spec.name + "' regressor '" + v +
                            "' is not a decomposed variable");
      for (const std::string& v : spec.endogenous)
        if (std::find(spec.regressors.begin(), spec.regressors.end(), v) ==
            spec.regressors.end())
          throw ConfigError("config: regression '" + spec.name + "' endogenous '" + v +
                            "' is not among its regressors");
      c.regressions.push_back(std::move(spec));
    }
  }

  if (j.contains("causality")) {
    const ordered_json& cz = j["causality"];
    CausalitySpec spec;
    const ordered_json& pairs = require(cz, "pairs", "causality");
    if (!pairs.is_array() || pairs.empty())
      throw ConfigError("config: causality.pairs must be a non-empty array");
    for (const auto& p : pairs) {
      if (!p.is_array() || p.size() != 2 || !p[0].is_string() || !p[1].is_string())
        throw ConfigError("config: each causality pair must be [cause, effect]");
      const std::string cause = p[0];
      const std::string effect = p[1];
      if (cause == effect) throw ConfigError("config: causality pair must name two series");
      for (const std::string& v : {cause, effect})
        if (!schema_open && std::find(known.begin(), known.end(), v) == known.end())
          throw ConfigError("config: causality references missing column '" + v + "'");
      spec.pairs.emplace_back(cause, effect);
    }
    if (cz.contains("lag")) {
      if (cz["lag"].is_string()) {
        if (cz["lag"] != "aic") throw ConfigError("config: causality.lag must be a count or 'aic'");
        spec.lag = 0;
      } else {
        spec.lag = cz["lag"].get<int>();
        if (spec.lag < 1) throw ConfigError("config: causality.lag must be >= 1");
      }
    }
    if (cz.contains("p_max")) spec.p_max = cz["p_max"].get<int>();
    if (spec.p_max < 1) throw ConfigError("config: causality.p_max must be >= 1");
    if (cz.contains("grid_points")) spec.grid.points = cz["grid_points"].get<int>();
    if (spec.grid.points < 2) throw ConfigError("config: causality.grid_points must be >= 2");
    if (cz.contains("form")) {
      const std::string f = cz["form"];
      if (f == "chi2")
        spec.form = TestForm::chi_squared;
      else if (f == "f")
        spec.form = TestForm::f_test;
      else
        throw ConfigError("config: causality.form must be 'chi2' or 'f', got '" + f + "'");
    }
    c.causality = std::move(spec);
  }

  const ordered_json& output = require(j, "output", "config");
  std::filesystem::path out_dir = require_string(output, "directory", "output");
  c.output_dir = out_dir.is_absolute() ? out_dir : base_dir / out_dir;
  if (output.contains("formats")) {
    c.formats.clear();
    for (const std::string& f : string_list(output["formats"], "output.formats")) {
      if (f != "csv" && f != "json" && f != "svg")
        throw ConfigError("config: unknown output format '" + f + "'");
      c.formats.insert(f);
    }
  }
  c.formats.insert("json");  // the manifest always exists
  return c;
}

}  // namespace

PipelineConfig parse_pipeline_config_text(const std::string& text,
                                          const std::filesystem::path& base_dir) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config_json(j, base_dir, text);
}

PipelineConfig parse_pipeline_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_pipeline_config_text(buf.str(), path.parent_path());
}

Stage stage_from_name(const std::string& name) {
  if (name == "transform") return Stage::transform;
  if (name == "slice") return Stage::slice;
  if (name == "decompose") return Stage::decompose;
  if (name == "summarize") return Stage::summarize;
  if (name == "regress") return Stage::regress;
  if (name == "causality") return Stage::causality;
  throw ConfigError("unknown stage '" + name +
                    "' (expected transform|slice|decompose|summarize|regress|causality)");
}

std::string stage_name(Stage s) {
  switch (s) {
    case Stage::transform: return "transform";
    case Stage::slice: return "slice";
    case Stage::decompose: return "decompose";
    case Stage::summarize: return "summarize";
    case Stage::regress: return "regress";
    case Stage::causality: return "causality";
  }
  return "?";
}

namespace {

// Re-throws stage failures with the stage and period attached, preserving
// the error category (and with it the CLI exit code).
template <typename Fn>
void run_stage(Stage stage, const std::string& period, Fn&& fn) {
  const std::string tag =
      "stage " + stage_name(stage) + (period.empty() ? "" : " (period '" + period + "')");
  try {
    fn();
  } catch (const ConfigError& e) {
    throw ConfigError(tag + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(tag + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(tag + ": " + e.what());
  } catch (const std::exception& e) {
    throw NumericError(tag + ": " + e.what());
  }
}

std::vector<double> require_column_values(const SeriesTable& t, const std::string& name) {
  if (!t.has_column(name)) throw DataError("column '" + name + "' not found");
  return t.column(name).values;
}

}  // namespace

ReportBundle run_pipeline(const PipelineConfig& config, std::optional<Stage> through_stage) {
  const Stage last = through_stage.value_or(Stage::causality);
  ReportBundle bundle;
  bundle.config = config;

  {
    std::ifstream in(config.input_path, std::ios::binary);
    if (!in) throw DataError("cannot open input '" + config.input_path.string() + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    bundle.input_bytes = buf.str();
  }

  SeriesTable table;
  run_stage(Stage::transform, "", [&] {
    std::istringstream in(bundle.input_bytes);
    table = parse_series_table(in, config.schema);
    for (const TransformDirective& d : config.transforms) {
      for (const std::string& col : d.columns) {
        const TimeSeries& src = table.column(col);  // throws if missing
        if (d.op == "log") {
          table.add_column(log_transform(src));
        } else {
          table.add_column(to_per_capita(src, table.column(d.population)));
        }
      }
    }
    for (const std::string& v : config.variables)
      if (!table.has_column(v))
        throw ConfigError("variable '" + v + "' not present after transforms");
  });
  if (last < Stage::slice) return bundle;

  for (const auto& [period_name, window] : config.periods) {
    SeriesTable sliced;
    run_stage(Stage::slice, period_name, [&] {
      for (const TimeSeries& col : table.columns) {
        TimeSeries cut = slice_period(col, window.start, window.end);
        if (sliced.index.empty())
          for (std::size_t i = 0; i < cut.size(); ++i) sliced.index.push_back(cut.period_at(i));
        sliced.add_column(std::move(cut));
      }
    });
    if (last < Stage::decompose) continue;

    std::map<std::string, Decomposition> decomps;
    run_stage(Stage::decompose, period_name, [&] {
      for (const std::string& v : config.variables) {
        Decomposition d = decompose(sliced.column(v), config.sift);
        for (const std::string& w : d.diagnostics.warnings)
          bundle.diagnostics.push_back("[" + period_name + "/" + v + "] " + w);
        if (d.diagnostics.cap_hit)
          bundle.diagnostics.push_back("[" + period_name + "/" + v + "] mode cap reached");
        decomps.emplace(v, std::move(d));
      }
    });

    if (last >= Stage::summarize) {
      run_stage(Stage::summarize, period_name, [&] {
        for (const std::string& v : config.variables) {
          DecompositionReport rep;
          rep.period = period_name;
          rep.variable = v;
          rep.decomposition = decomps.at(v);
          rep.modes = summarize_decomposition(rep.decomposition);
          const int k = static_cast<int>(rep.decomposition.imfs.size());
          BandMap map = config.bands ? *config.bands : BandMap::default_for(k);
          if (config.bands && !map.covers(k)) {
            bundle.diagnostics.push_back("[" + period_name + "/" + v + "] configured band map " +
                                         "does not cover " + std::to_string(k) +
                                         " modes; using the default split");
            map = BandMap::default_for(k);
          }
          rep.bands = aggregate_bands(rep.decomposition, map);
          bundle.decompositions.push_back(std::move(rep));
        }
      });
    } else {
      for (const std::string& v : config.variables) {
        DecompositionReport rep;
        rep.period = period_name;
        rep.variable = v;
        rep.decomposition = decomps.at(v);
        bundle.decompositions.push_back(std::move(rep));
      }
    }
    if (last < Stage::regress) continue;

    run_stage(Stage::regress, period_name, [&] {
      for (const RegressionSpec& spec : config.regressions) {
        GridReport rep;
        rep.period = period_name;
        rep.grid = scale_regressions(sliced, decomps, spec);
        for (const std::string& w : rep.grid.warnings)
          bundle.diagnostics.push_back("[" + period_name + "/" + spec.name + "] " + w);
        bundle.grids.push_back(std::move(rep));
      }
    });
    if (last < Stage::causality) continue;

    if (config.causality) {
      run_stage(Stage::causality, period_name, [&] {
        for (const auto& [cause, effect] : config.causality->pairs) {
          const std::vector<double> xv = require_column_values(sliced, cause);
          const std::vector<double> yv = require_column_values(sliced, effect);
          int p = config.causality->lag;
          if (p == 0) p = select_lag(xv, yv, config.causality->p_max);
          CausalityReport rep;
          rep.period = period_name;
          rep.cause = cause;
          rep.effect = effect;
          rep.forward = causality_spectrum(xv, yv, p, Direction::x_to_y,
                                           config.causality->grid, config.causality->form);
          rep.reverse = causality_spectrum(xv, yv, p, Direction::y_to_x,
                                           config.causality->grid, config.causality->form);
          rep.forward.cause = cause;
          rep.forward.effect = effect;
          rep.reverse.cause = effect;
          rep.reverse.effect = cause;
          for (const CausalitySpectrum* s : {&rep.forward, &rep.reverse})
            for (const std::string& note : s->notes)
              bundle.diagnostics.push_back("[" + period_name + "/" + s->cause + "->" + s->effect +
                                           "] " + note);
          bundle.causality.push_back(std::move(rep));
        }
      });
    }
  }
  return bundle;
}

// ------------------------------------------------------------------ emit --

namespace {

std::string sanitize(const std::string& name) {
  std::string out;
  for (char c : name)
    out.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
  return out;
}

std::string csv_quote(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
            else out.push_back(c);
  }
  out += "\"";
  return out;
}

std::string stars_of(double p) { return significance_stars(p); }

ordered_json corr_json(double value, double p, const char* key) {
  ordered_json j;
  j[key] = value;
  j["p"] = p;
  j["stars"] = stars_of(p);
  return j;
}

// ---- mode / band summaries

std::string modes_csv(const DecompositionReport& rep) {
  std::ostringstream out;
  out << "mode,mean_period,pearson_r,pearson_p,pearson_sig,kendall_tau,kendall_p,kendall_sig,"
         "variance_share_pct\n";
  for (const ImfSummary& r : rep.modes) {
    out << r.mode << ',';
    out << (std::isinf(r.mean_period) ? std::string() : fmt("%.2f", r.mean_period)) << ',';
    out << fmt("%.4f", r.pearson_r) << ',' << fmt("%.4f", r.pearson_p) << ','
        << stars_of(r.pearson_p) << ',';
    out << fmt("%.4f", r.kendall_tau) << ',' << fmt("%.4f", r.kendall_p) << ','
        << stars_of(r.kendall_p) << ',';
    out << fmt("%.2f", 100.0 * r.variance_share) << '\n';
  }
  return out.str();
}

ordered_json modes_json(const DecompositionReport& rep) {
  ordered_json j;
  j["period"] = rep.period;
  j["variable"] = rep.variable;
  j["rows"] = ordered_json::array();
  for (const ImfSummary& r : rep.modes) {
    ordered_json row;
    row["mode"] = r.mode;
    if (std::isinf(r.mean_period))
      row["mean_period"] = nullptr;
    else
      row["mean_period"] = r.mean_period;
    row["pearson"] = corr_json(r.pearson_r, r.pearson_p, "r");
    row["kendall"] = corr_json(r.kendall_tau, r.kendall_p, "tau");
    row["variance_share"] = r.variance_share;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

std::string bands_csv(const DecompositionReport& rep) {
  std::ostringstream out;
  out << "band,pearson_r,pearson_p,pearson_sig,kendall_tau,kendall_p,kendall_sig,"
         "variance_share_pct\n";
  for (const BandSummary& b : rep.bands) {
    out << b.band << ',';
    out << fmt("%.4f", b.pearson_r) << ',' << fmt("%.4f", b.pearson_p) << ','
        << stars_of(b.pearson_p) << ',';
    out << fmt("%.4f", b.kendall_tau) << ',' << fmt("%.4f", b.kendall_p) << ','
        << stars_of(b.kendall_p) << ',';
    out << fmt("%.2f", 100.0 * b.variance_share) << '\n';
  }
  return out.str();
}

ordered_json bands_json(const DecompositionReport& rep) {
  ordered_json j;
  j["period"] = rep.period;
  j["variable"] = rep.variable;
  j["rows"] = ordered_json::array();
  for (const BandSummary& b : rep.bands) {
    ordered_json row;
    row["band"] = b.band;
    row["pearson"] = corr_json(b.pearson_r, b.pearson_p, "r");
    row["kendall"] = corr_json(b.kendall_tau, b.kendall_p, "tau");
    row["variance_share"] = b.variance_share;
    j["rows"].push_back(std::move(row));
  }
  return j;
}

// ---- decomposition series

std::string decomposition_csv(const DecompositionReport& rep) {
  const Decomposition& d = rep.decomposition;
  SeriesTable t;
  const std::size_t n = d.source.values.size();
  for (std::size_t i = 0; i < n; ++i) t.index.push_back(d.source.period_at(i));
  TimeSeries src = d.source;
  src.name = "source";
  t.add_column(std::move(src));
  for (const Imf& imf : d.imfs) {
    TimeSeries col;
    col.name = "IMF" + std::to_string(imf.index);
    col.start = d.source.start;
    col.values = imf.values;
    t.add_column(std::move(col));
  }
  TimeSeries res;
  res.name = "residue";
  res.start = d.source.start;
  res.values = d.residue;
  t.add_column(std::move(res));
  return emit_series_table(t);
}

// ---- regression grids

std::string grid_cell_text(const GridCell& cell, const std::string& regressor_name) {
  if (!cell.result) return "NA";
  const RegressionResult& r = *cell.result;
  for (std::size_t j = 0; j < r.names.size(); ++j) {
    if (r.names[j] == regressor_name) {
      return fmt("%.4f", r.coefficients[j]) + stars_of(r.p_values[j]) + " (" +
             fmt("%.3f", r.t_stats[j]) + ")";
    }
  }
  return "NA";
}

std::string grid_csv(const GridReport& rep) {
  const RegressionGrid& g = rep.grid;
  std::ostringstream out;
  out << "row";
  for (const std::string& c : g.columns) out << ',' << csv_quote(c);
  out << '\n';

  std::vector<std::string> row_names;
  for (const GridCell& cell : g.cells)
    if (cell.result) {
      row_names = cell.result->names;
      break;
    }
  // regressors first, constant last, matching the published table layout
  std::stable_partition(row_names.begin(), row_names.end(),
                        [](const std::string& n) { return n != "const"; });

  for (const std::string& rn : row_names) {
    out << csv_quote(rn == "const" ? "C" : rn);
    for (const GridCell& cell : g.cells) out << ',' << csv_quote(grid_cell_text(cell, rn));
    out << '\n';
  }
  if (g.estimator == Estimator::ols) {
    out << "R2";
    for (const GridCell& cell : g.cells)
      out << ',' << (cell.result ? fmt("%.4f", cell.result->r_squared) : "NA");
    out << '\n';
  } else {
    out << "Cragg-Donald F";
    for (const GridCell& cell : g.cells) {
      if (cell.result && cell.result->instrument_strength) {
        const double f = cell.result->instrument_strength->cragg_donald_f;
        out << ',' << (std::isinf(f) ? "inf" : fmt("%.2f", f));
      } else {
        out << ",NA";
      }
    }
    out << '\n';
    out << "instruments";
    for (const GridCell& cell : g.cells) {
      if (cell.result && cell.result->instrument_strength) {
        const InstrumentStrength& s = *cell.result->instrument_strength;
        out << ',' << (s.strong ? "strong" : (s.marginal ? "marginal" : "weak"));
      } else {
        out << ",NA";
      }
    }
    out << '\n';
  }
  out << "Obs";
  for (const GridCell& cell : g.cells)
    out << ',' << (cell.result ? std::to_string(cell.result->n_obs) : "NA");
  out << '\n';
  return out.str();
}

ordered_json grid_json(const GridReport& rep) {
  const RegressionGrid& g = rep.grid;
  ordered_json j;
  j["period"] = rep.period;
  j["name"] = g.name;
  j["dependent"] = g.dependent;
  j["estimator"] = g.estimator == Estimator::ols ? "ols" : "tsls";
  j["columns"] = g.columns;
  j["warnings"] = g.warnings;
  j["cells"] = ordered_json::object();
  for (std::size_t i = 0; i < g.cells.size(); ++i) {
    const GridCell& cell = g.cells[i];
    ordered_json cj;
    if (!cell.result) {
      cj["error"] = cell.error;
    } else {
      const RegressionResult& r = *cell.result;
      cj["rows"] = ordered_json::array();
      for (std::size_t k = 0; k < r.names.size(); ++k) {
        ordered_json row;
        row["name"] = r.names[k];
        row["coef"] = r.coefficients[k];
        row["t"] = r.t_stats[k];
        row["p"] = r.p_values[k];
        row["stars"] = stars_of(r.p_values[k]);
        cj["rows"].push_back(std::move(row));
      }
      if (g.estimator == Estimator::ols) cj["r_squared"] = r.r_squared;
      cj["n_obs"] = r.n_obs;
      if (r.instrument_strength) {
        const InstrumentStrength& s = *r.instrument_strength;
        cj["cragg_donald_f"] = std::isinf(s.cragg_donald_f)
                                   ? ordered_json(nullptr)
                                   : ordered_json(s.cragg_donald_f);
        cj["instruments"] = s.strong ? "strong" : (s.marginal ? "marginal" : "weak");
      }
    }
    j["cells"][g.columns[i]] = std::move(cj);
  }
  return j;
}

// ---- causality spectra

void spectrum_csv_rows(std::ostringstream& out, const CausalitySpectrum& s) {
  for (std::size_t i = 0; i < s.omegas.size(); ++i) {
    out << s.cause << "->" << s.effect << ',' << fmt("%.6f", s.omegas[i]) << ','
        << fmt("%.6f", s.statistics[i]) << ',' << fmt("%.4f", s.critical) << ','
        << (s.statistics[i] > s.critical ? 1 : 0) << '\n';
  }
}

std::string causality_csv(const CausalityReport& rep) {
  std::ostringstream out;
  out << "direction,omega,statistic,critical,significant\n";
  spectrum_csv_rows(out, rep.forward);
  spectrum_csv_rows(out, rep.reverse);
  return out.str();
}

ordered_json spectrum_json(const CausalitySpectrum& s) {
  ordered_json j;
  j["cause"] = s.cause;
  j["effect"] = s.effect;
  j["p"] = s.p;
  j["df"] = s.df;
  j["form"] = s.form == TestForm::chi_squared ? "chi2" : "f";
  j["critical"] = s.critical;
  j["omega"] = s.omegas;
  j["statistic"] = s.statistics;
  j["significant_bands"] = ordered_json::array();
  for (std::size_t i = 0; i < s.significant_bands.size(); ++i) {
    ordered_json b;
    b["omega_lo"] = s.significant_bands[i].lo;
    b["omega_hi"] = s.significant_bands[i].hi;
    b["cycle_lo"] = s.cycle_bands[i].lo;
    b["cycle_hi"] = s.cycle_bands[i].hi;
    j["significant_bands"].push_back(std::move(b));
  }
  j["notes"] = s.notes;
  return j;
}

ordered_json causality_json(const CausalityReport& rep) {
  ordered_json j;
  j["period"] = rep.period;
  j["forward"] = spectrum_json(rep.forward);
  j["reverse"] = spectrum_json(rep.reverse);
  return j;
}

// ---- SVG rendering (hand-rolled, deterministic coordinates)

struct PanelBox {
  double x, y, w, h;
};

void svg_polyline(std::ostringstream& out, const PanelBox& box, const std::vector<double>& ys,
                  double lo, double hi, const char* stroke) {
  out << "<polyline fill=\"none\" stroke=\"" << stroke << "\" stroke-width=\"1\" points=\"";
  const double span = hi - lo;
  const std::size_t n = ys.size();
  for (std::size_t i = 0; i < n; ++i) {
    const double fx = n > 1 ? static_cast<double>(i) / (n - 1) : 0.5;
    const double fy = span > 0.0 ? (ys[i] - lo) / span : 0.5;
    out << fmt("%.2f", box.x + fx * box.w) << ',' << fmt("%.2f", box.y + (1.0 - fy) * box.h)
        << ' ';
  }
  out << "\"/>\n";
}

void svg_text(std::ostringstream& out, double x, double y, const std::string& text,
              const char* anchor = "start", int size = 11) {
  out << "<text x=\"" << fmt("%.2f", x) << "\" y=\"" << fmt("%.2f", y) << "\" font-family=\""
      << "monospace\" font-size=\"" << size << "\" text-anchor=\"" << anchor << "\">" << text
      << "</text>\n";
}

std::string imf_stack_svg(const DecompositionReport& rep) {
  const Decomposition& d = rep.decomposition;
  std::vector<std::pair<std::string, const std::vector<double>*>> panels;
  panels.emplace_back("source", &d.source.values);
  for (const Imf& imf : d.imfs) panels.emplace_back("IMF" + std::to_string(imf.index), &imf.values);
  panels.emplace_back("residue", &d.residue);

  const double width = 860, panel_h = 72, gap = 10, left = 90, right = 20, top = 24;
  const double height = top + panels.size() * (panel_h + gap) + 10;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << fmt("%.0f", height) << "\" viewBox=\"0 0 " << width << ' ' << fmt("%.0f", height)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg_text(out, left, 16, rep.variable + " [" + rep.period + "] decomposition");
  for (std::size_t i = 0; i < panels.size(); ++i) {
    const PanelBox box{left, top + i * (panel_h + gap), width - left - right, panel_h};
    const std::vector<double>& v = *panels[i].second;
    const double lo = *std::min_element(v.begin(), v.end());
    const double hi = *std::max_element(v.begin(), v.end());
    out << "<rect x=\"" << fmt("%.2f", box.x) << "\" y=\"" << fmt("%.2f", box.y) << "\" width=\""
        << fmt("%.2f", box.w) << "\" height=\"" << fmt("%.2f", box.h)
        << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
    svg_polyline(out, box, v, lo, hi, "#1f4e8c");
    svg_text(out, left - 8, box.y + box.h / 2 + 4, panels[i].first, "end");
  }
  out << "</svg>\n";
  return out.str();
}

void causality_panel(std::ostringstream& out, const PanelBox& box, const CausalitySpectrum& s) {
  double hi = s.critical * 1.25;
  for (double v : s.statistics) hi = std::max(hi, v);
  hi *= 1.05;
  const double lo = 0.0;

  out << "<rect x=\"" << fmt("%.2f", box.x) << "\" y=\"" << fmt("%.2f", box.y) << "\" width=\""
      << fmt("%.2f", box.w) << "\" height=\"" << fmt("%.2f", box.h)
      << "\" fill=\"none\" stroke=\"#cccccc\"/>\n";
  svg_polyline(out, box, s.statistics, lo, hi, "#1f4e8c");
  // the single critical-value line of this panel
  const double cy = box.y + (1.0 - (s.critical - lo) / (hi - lo)) * box.h;
  out << "<line x1=\"" << fmt("%.2f", box.x) << "\" y1=\"" << fmt("%.2f", cy) << "\" x2=\""
      << fmt("%.2f", box.x + box.w) << "\" y2=\"" << fmt("%.2f", cy)
      << "\" stroke=\"#b03030\" stroke-dasharray=\"5,3\" class=\"critical\"/>\n";
  svg_text(out, box.x + box.w + 4, cy + 4, fmt("%.2f", s.critical), "start", 10);
  svg_text(out, box.x, box.y - 6, s.cause + " \xE2\x86\x92 " + s.effect);
  // omega axis ticks at the grid ends and midpoint
  const double w0 = s.omegas.front(), w1 = s.omegas.back();
  for (double frac : {0.0, 0.5, 1.0}) {
    const double w = w0 + frac * (w1 - w0);
    svg_text(out, box.x + frac * box.w, box.y + box.h + 14, fmt("%.2f", w), "middle", 10);
  }
}

std::string causality_svg(const CausalityReport& rep) {
  const double width = 640, panel_h = 180, gap = 46, left = 50, right = 60, top = 30;
  const double height = top + 2 * panel_h + gap + 30;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << fmt("%.0f", height) << "\" viewBox=\"0 0 " << width << ' ' << fmt("%.0f", height)
      << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  causality_panel(out, {left, top, width - left - right, panel_h}, rep.forward);
  causality_panel(out, {left, top + panel_h + gap, width - left - right, panel_h}, rep.reverse);
  out << "</svg>\n";
  return out.str();
}

}  // namespace

EmitResult emit_report(const ReportBundle& bundle) {
  const PipelineConfig& cfg = bundle.config;
  const bool want_csv = cfg.formats.count("csv") > 0;
  const bool want_svg = cfg.formats.count("svg") > 0;

  std::error_code ec;
  std::filesystem::create_directories(cfg.output_dir, ec);
  if (ec) throw DataError("cannot create output directory '" + cfg.output_dir.string() + "'");

  EmitResult result;
  std::vector<std::pair<std::string, std::string>> manifest_rows;  // name -> content hash source

  auto write_file = [&](const std::string& name, const std::string& content) {
    const std::filesystem::path path = cfg.output_dir / name;
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << content) || !out.flush())
      throw DataError("cannot write '" + path.string() + "'");
    result.files.push_back(path);
    manifest_rows.emplace_back(name, content);
  };

  try {
    for (const DecompositionReport& rep : bundle.decompositions) {
      const std::string stem = sanitize(rep.period) + "_" + sanitize(rep.variable);
      if (want_csv) write_file(stem + "_decomposition.csv", decomposition_csv(rep));
      if (!rep.modes.empty()) {
        if (want_csv) write_file(stem + "_modes.csv", modes_csv(rep));
        write_file(stem + "_modes.json", modes_json(rep).dump(2) + "\n");
        if (want_csv) write_file(stem + "_bands.csv", bands_csv(rep));
        write_file(stem + "_bands.json", bands_json(rep).dump(2) + "\n");
      }
      if (want_svg) write_file(stem + "_imfs.svg", imf_stack_svg(rep));
    }
    for (const GridReport& rep : bundle.grids) {
      const std::string stem = sanitize(rep.period) + "_" + sanitize(rep.grid.name);
      if (want_csv) write_file(stem + "_grid.csv", grid_csv(rep));
      write_file(stem + "_grid.json", grid_json(rep).dump(2) + "\n");
    }
    for (const CausalityReport& rep : bundle.causality) {
      const std::string stem = sanitize(rep.period) + "_causality_" + sanitize(rep.cause) + "_" +
                               sanitize(rep.effect);
      if (want_csv) write_file(stem + ".csv", causality_csv(rep));
      write_file(stem + ".json", causality_json(rep).dump(2) + "\n");
      if (want_svg) write_file(stem + ".svg", causality_svg(rep));
    }

    ordered_json manifest;
    manifest["tool"] = "emdec";
    manifest["version"] = "0.1.0";
    manifest["config_hash"] = hex64(fnv1a(cfg.raw_text));
    manifest["input_hash"] = hex64(fnv1a(bundle.input_bytes));
    manifest["periods"] = ordered_json::array();
    for (const auto& [name, window] : cfg.periods) {
      ordered_json p;
      p["name"] = name;
      p["start"] = window.start.str();
      p["end"] = window.end.str();
      manifest["periods"].push_back(std::move(p));
    }
    manifest["variables"] = cfg.variables;
    manifest["sift"] = {{"sd_threshold", cfg.sift.sd_threshold},
                        {"max_sift_iterations", cfg.sift.max_sift_iterations},
                        {"boundary",
                         cfg.sift.boundary == BoundaryPolicy::mirror ? "mirror" : "clamp"}};
    manifest["diagnostics"] = bundle.diagnostics;

    std::sort(manifest_rows.begin(), manifest_rows.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    manifest["files"] = ordered_json::array();
    for (const auto& [name, content] : manifest_rows) {
      ordered_json f;
      f["path"] = name;
      f["bytes"] = content.size();
      f["fnv1a"] = hex64(fnv1a(content));
      manifest["files"].push_back(std::move(f));
    }
    write_file("manifest.json", manifest.dump(2) + "\n");
  } catch (...) {
    for (const std::filesystem::path& p : result.files) std::filesystem::remove(p, ec);
    throw;
  }
  return result;
}

}  // namespace emdec
