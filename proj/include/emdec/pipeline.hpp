#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "emdec/analytics.hpp"
#include "emdec/causality.hpp"
#include "emdec/emd.hpp"
#include "emdec/regression.hpp"
#include "emdec/series.hpp"

namespace emdec {

struct TransformDirective {
  std::string op;  // "log" or "per_capita"
  std::vector<std::string> columns;
  std::string population;  // per_capita only
};

struct PeriodWindow {
  Period start{0, 1};
  Period end{0, 1};
};

struct CausalitySpec {
  std::vector<std::pair<std::string, std::string>> pairs;  // (cause, effect)
  int lag = 0;     // 0 means select by information criterion
  int p_max = 8;   // search bound when lag == 0
  GridSpec grid;
  TestForm form = TestForm::chi_squared;
};

struct PipelineConfig {
  std::filesystem::path input_path;
  TableSchema schema;
  std::vector<TransformDirective> transforms;
  std::vector<std::string> variables;  // columns to decompose, post-transform names
  std::vector<std::pair<std::string, PeriodWindow>> periods;  // named, in config order
  SiftConfig sift;
  std::optional<BandMap> bands;  // unset: default split per mode count
  std::vector<RegressionSpec> regressions;
  std::optional<CausalitySpec> causality;
  std::filesystem::path output_dir = "out";
  std::set<std::string> formats = {"csv", "json"};  // svg optional
  std::string raw_text;  // config file bytes, hashed into the manifest
};

PipelineConfig parse_pipeline_config(const std::filesystem::path& path);
PipelineConfig parse_pipeline_config_text(const std::string& text,
                                          const std::filesystem::path& base_dir);

// Pipeline stages run per period, in this order. A stage filter truncates
// the run after the named stage.
enum class Stage { transform, slice, decompose, summarize, regress, causality };
Stage stage_from_name(const std::string& name);
std::string stage_name(Stage s);

struct DecompositionReport {
  std::string period;
  std::string variable;
  Decomposition decomposition;
  std::vector<ImfSummary> modes;
  std::vector<BandSummary> bands;
};

struct GridReport {
  std::string period;
  RegressionGrid grid;
};

struct CausalityReport {
  std::string period;
  std::string cause;
  std::string effect;
  CausalitySpectrum forward;   // cause -> effect
  CausalitySpectrum reverse;   // effect -> cause
};

struct ReportBundle {
  PipelineConfig config;
  std::string input_bytes;  // raw input file, hashed into the manifest
  std::vector<DecompositionReport> decompositions;
  std::vector<GridReport> grids;
  std::vector<CausalityReport> causality;
  std::vector<std::string> diagnostics;
};

// Executes transform -> slice -> decompose -> summarize -> regress ->
// causality for each named period, entirely in memory. Failures carry the
// stage and period in the message.
ReportBundle run_pipeline(const PipelineConfig& config,
                          std::optional<Stage> through_stage = std::nullopt);

struct EmitResult {
  std::vector<std::filesystem::path> files;  // everything written, manifest last
};

// Writes the bundle under config.output_dir. CSV and JSON always; SVG when
// the config requests it. On failure every file written so far is removed.
EmitResult emit_report(const ReportBundle& bundle);

// FNV-1a, the hash recorded per file in the manifest.
std::uint64_t fnv1a(const std::string& bytes);

}  // namespace emdec
