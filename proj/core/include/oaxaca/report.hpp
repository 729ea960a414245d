#pragma once

#include <optional>
#include <string>
#include <vector>

#include "oaxaca/bootstrap.hpp"
#include "oaxaca/decomposition.hpp"
#include "oaxaca/ols.hpp"

namespace oaxaca {

enum class OutputFormat { text, json, csv };
OutputFormat output_format_from_string(std::string_view text);

/// Row accounting shared by every report.
struct DataSummary {
  std::size_t rows_read = 0;
  std::size_t rows_dropped_missing = 0;
  std::size_t rows_dropped_group = 0;
  std::size_t group_a_rows = 0;
  std::size_t group_b_rows = 0;
};

struct ModelSummary {
  std::string outcome;
  OutcomeTransform transform = OutcomeTransform::identity;
  std::string group_variable;
  std::string group_a_label;
  std::string group_b_label;

  static ModelSummary from(const ModelSpec& spec);
};

/// Both wage equations plus confidence intervals, mirroring the usual
/// two-column regression table (coefficient, CI, stars, R2, F).
struct FitReport {
  ModelSummary model;
  DataSummary data;
  double level = 0.95;
  OlsFit fit_a;
  OlsFit fit_b;
  std::vector<Interval> intervals_a;
  std::vector<Interval> intervals_b;
};

struct DecomposeReport {
  ModelSummary model;
  DataSummary data;
  Reference reference = Reference::female_coefficients;
  double group_a_mean = 0.0;  // fitted mean outcomes
  double group_b_mean = 0.0;
  TwofoldResult twofold;
  ThreefoldResult threefold;
  std::vector<DetailRow> detail;
  /// |(E + C + I) - gap| / max(1, |gap|); reported so every run shows its
  /// own additivity diagnostic.
  double additivity_residual = 0.0;
  std::optional<ComponentIntervals> bootstrap;
};

struct CheckReport {
  ModelSummary model;
  DataSummary data;
  std::vector<IdentityCheck> checks;
  bool ok() const;
};

std::string render_fit(const FitReport& report, OutputFormat format);
std::string render_decompose(const DecomposeReport& report, OutputFormat format);
std::string render_check(const CheckReport& report, OutputFormat format);

}  // namespace oaxaca
