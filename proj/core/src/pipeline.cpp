#include "oaxaca/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

PipelineResult run_pipeline(const RunConfig& config) {
  PipelineResult result;
  result.model = load_model(config.model_path);
  const Dataset raw = read_csv(config.input_path, result.model.csv);
  result.data.rows_read = raw.n_rows();

  ListwiseResult cleaned = listwise_delete(raw, result.model.spec);
  result.data.rows_dropped_missing = cleaned.dropped_rows;

  const ValidationReport report = validate(cleaned.data, result.model.spec);
  if (!report.ok()) throw ValidationError(report.summary());

  GroupSplit split = split_groups(cleaned.data, result.model.spec);
  result.data.rows_dropped_group = split.dropped_rows;
  result.data.group_a_rows = split.group_a.n_rows();
  result.data.group_b_rows = split.group_b.n_rows();

  result.built_a = build_design(split.group_a, result.model.spec);
  result.built_b = build_design(split.group_b, result.model.spec);
  result.fit_a = fit_ols(result.built_a.design, result.built_a.outcome);
  result.fit_b = fit_ols(result.built_b.design, result.built_b.outcome);
  result.means_a = column_means(result.built_a.design);
  result.means_b = column_means(result.built_b.design);
  result.clean = std::move(cleaned.data);
  return result;
}

FitReport run_fit(const RunConfig& config) {
  PipelineResult pipeline = run_pipeline(config);
  FitReport report;
  report.model = ModelSummary::from(pipeline.model.spec);
  report.data = pipeline.data;
  report.level = config.level;
  report.intervals_a = coefficient_intervals(pipeline.fit_a, config.level);
  report.intervals_b = coefficient_intervals(pipeline.fit_b, config.level);
  report.fit_a = std::move(pipeline.fit_a);
  report.fit_b = std::move(pipeline.fit_b);
  return report;
}

DecomposeReport run_decompose(const RunConfig& config) {
  PipelineResult pipeline = run_pipeline(config);
  DecomposeReport report;
  report.model = ModelSummary::from(pipeline.model.spec);
  report.data = pipeline.data;
  report.reference = config.reference;
  report.group_a_mean = pipeline.fit_a.coefficients.dot(pipeline.means_a.values);
  report.group_b_mean = pipeline.fit_b.coefficients.dot(pipeline.means_b.values);
  report.twofold = twofold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a,
                           pipeline.means_b, config.reference);
  report.threefold = threefold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a,
                               pipeline.means_b, config.reference);
  report.detail = detailed_by_variable(report.threefold, pipeline.model.spec);
  const double sum = report.threefold.endowments + report.threefold.coefficients +
                     report.threefold.interaction;
  report.additivity_residual = std::abs(sum - report.threefold.gap) /
                               std::max(1.0, std::abs(report.threefold.gap));
  if (config.bootstrap.has_value()) {
    report.bootstrap = bootstrap_decomposition(pipeline.clean, pipeline.model.spec,
                                               config.reference, *config.bootstrap);
  }
  return report;
}

CheckReport run_check(const RunConfig& config) {
  PipelineResult pipeline = run_pipeline(config);
  CheckReport report;
  report.model = ModelSummary::from(pipeline.model.spec);
  report.data = pipeline.data;

  const TwofoldResult two_female =
      twofold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a, pipeline.means_b,
              Reference::female_coefficients);
  const TwofoldResult two_male =
      twofold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a, pipeline.means_b,
              Reference::male_coefficients);
  const ThreefoldResult three_female =
      threefold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a,
                pipeline.means_b, Reference::female_coefficients);
  const ThreefoldResult three_male =
      threefold(pipeline.fit_a, pipeline.fit_b, pipeline.means_a,
                pipeline.means_b, Reference::male_coefficients);

  for (const auto& pair :
       {consistency_check(two_female, three_female),
        consistency_check(two_male, three_male),
        consistency_check(two_male, three_female),
        consistency_check(two_female, three_male)}) {
    for (const auto& check : pair.checks) {
      // The three structural checks repeat across pairs; keep one copy each.
      const bool duplicate =
          std::any_of(report.checks.begin(), report.checks.end(),
                      [&](const IdentityCheck& c) { return c.name == check.name; });
      if (!duplicate) report.checks.push_back(check);
    }
  }
  return report;
}

ScoreResult run_score(const RunConfig& config) {
  const McaConfig mca = load_mca_config(config.model_path);
  const Dataset raw = read_csv(config.input_path, mca.csv);
  if (raw.n_rows() == 0) throw ValidationError("score: empty dataset");

  // Fit on rows complete in the selected columns; incomplete rows keep an
  // empty score cell.
  std::vector<std::size_t> columns;
  for (const auto& var : mca.variables) {
    auto idx = raw.column_index(var.name);
    if (!idx)
      throw ValidationError(fmt::format("score: column '{}' not found", var.name));
    columns.push_back(*idx);
  }
  Dataset complete;
  complete.columns = raw.columns;
  std::vector<std::size_t> complete_rows;
  for (std::size_t r = 0; r < raw.n_rows(); ++r) {
    const bool full_row = std::all_of(columns.begin(), columns.end(),
                                      [&](std::size_t c) {
                                        return raw.cell(r, c).has_value();
                                      });
    if (full_row) {
      complete.rows.push_back(raw.rows[r]);
      complete_rows.push_back(r);
    }
  }
  if (complete.n_rows() == 0)
    throw ValidationError("score: no complete rows among the selected columns");

  const McaModel model = fit_mca(complete, mca.variables, mca.options);
  const Eigen::VectorXd scores = score_individuals(model, complete);

  ScoreResult result;
  result.scored = raw;
  result.scored.columns.push_back(mca.score_column);
  for (auto& row : result.scored.rows) row.push_back(std::nullopt);
  const std::size_t score_col = result.scored.columns.size() - 1;
  for (std::size_t i = 0; i < complete_rows.size(); ++i) {
    char buffer[32];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer),
                                   scores(static_cast<Eigen::Index>(i)));
    if (ec != std::errc{}) throw NumericError("score: number formatting failed");
    result.scored.rows[complete_rows[i]][score_col] = std::string(buffer, ptr);
  }
  result.scored_rows = complete_rows.size();
  result.skipped_rows = raw.n_rows() - complete_rows.size();
  return result;
}

Dataset run_synth(const RunConfig& config,
                  std::optional<std::uint64_t> seed_override) {
  SyntheticSpec spec = load_synthetic_spec(config.model_path);
  if (seed_override.has_value()) spec.seed = *seed_override;
  return generate_synthetic(spec);
}

void emit_output(const std::string& text, const std::filesystem::path& output_path) {
  if (output_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output_path, std::ios::binary);
  if (!out)
    throw IoError(fmt::format("cannot open '{}' for writing", output_path.string()));
  out << text;
  if (!out)
    throw IoError(fmt::format("write failure on '{}'", output_path.string()));
}

}  // namespace oaxaca
