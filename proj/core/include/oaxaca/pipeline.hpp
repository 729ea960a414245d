#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "oaxaca/bootstrap.hpp"
#include "oaxaca/config.hpp"
#include "oaxaca/report.hpp"

namespace oaxaca {

/// One CLI invocation: input CSV, model (or synthetic/MCA) config, and
/// output options. The library entry points below are what the CLI calls,
/// exposed so runs can be driven and verified in-process.
struct RunConfig {
  std::filesystem::path input_path;
  std::filesystem::path model_path;
  std::filesystem::path output_path;  // empty = caller prints to stdout
  Reference reference = Reference::female_coefficients;
  std::optional<BootstrapConfig> bootstrap;
  OutputFormat format = OutputFormat::text;
  double level = 0.95;
};

/// Shared front of the pipeline: load, listwise-delete, validate (throws
/// ValidationError with the report summary if not fit-ready), split, build
/// designs and fit both groups.
struct PipelineResult {
  LoadedModel model;
  DataSummary data;
  Dataset clean;  // after listwise deletion
  DesignResult built_a;
  DesignResult built_b;
  OlsFit fit_a;
  OlsFit fit_b;
  MeanVector means_a;
  MeanVector means_b;
};
PipelineResult run_pipeline(const RunConfig& config);

FitReport run_fit(const RunConfig& config);
DecomposeReport run_decompose(const RunConfig& config);
CheckReport run_check(const RunConfig& config);

struct ScoreResult {
  Dataset scored;            // input CSV plus the score column
  std::size_t scored_rows = 0;
  std::size_t skipped_rows = 0;  // rows with missing asset cells
};
ScoreResult run_score(const RunConfig& config);

/// Generates the synthetic CSV described by the spec at model_path; the
/// optional seed overrides the one in the file.
Dataset run_synth(const RunConfig& config, std::optional<std::uint64_t> seed_override);

/// Writes text to output_path, or to stdout when the path is empty.
void emit_output(const std::string& text, const std::filesystem::path& output_path);

}  // namespace oaxaca
