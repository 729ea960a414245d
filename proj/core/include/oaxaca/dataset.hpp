#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace oaxaca {

enum class VariableKind { continuous, categorical, squared };

/// One predictor of the wage equation. Categorical variables carry their
/// level set in report order plus the omitted reference level; squared
/// variables are materialized from a continuous base column at design time.
struct VariableSpec {
  std::string name;
  VariableKind kind = VariableKind::continuous;
  std::vector<std::string> levels;  // categorical only, declared order
  std::string reference;            // categorical only, member of levels
  std::string base;                 // squared only, names a continuous predictor

  static VariableSpec make_continuous(std::string name);
  static VariableSpec make_categorical(std::string name,
                                       std::vector<std::string> levels,
                                       std::string reference);
  static VariableSpec make_squared(std::string name, std::string base);
};

enum class OutcomeTransform { identity, log };

/// The full model: outcome, its transform, the predictor roster and the
/// two-group split. Group a is the advantaged group ("male" in the shipped
/// examples), group b the candidate reference group ("female").
struct ModelSpec {
  std::string outcome;
  OutcomeTransform transform = OutcomeTransform::identity;
  std::vector<VariableSpec> predictors;
  std::string group_variable;
  std::string group_a_label;
  std::string group_b_label;

  /// Dataset columns the model reads (outcome, group, predictor sources).
  std::vector<std::string> used_columns() const;

  /// Enforces structural invariants (unique names, reference membership,
  /// squared bases). Throws ConfigError on violation.
  void check() const;

  const VariableSpec* find_predictor(std::string_view name) const;
};

/// Column-named table of string cells; std::nullopt marks a missing value.
/// Immutable by convention once loaded; all operations on it are pure.
struct Dataset {
  std::vector<std::string> columns;
  std::vector<std::vector<std::optional<std::string>>> rows;

  std::size_t n_rows() const { return rows.size(); }
  std::size_t n_cols() const { return columns.size(); }
  std::optional<std::size_t> column_index(std::string_view name) const;
  const std::optional<std::string>& cell(std::size_t row, std::size_t col) const {
    return rows[row][col];
  }
};

struct ValidationIssue {
  enum class Kind {
    unknown_column,
    missing_value,
    bad_numeric,
    unknown_level,
    unobserved_level,
    nonpositive_outcome,
    unknown_group_label,
    empty_group,
  };
  Kind kind;
  std::optional<std::size_t> row;  // 0-based data row where applicable
  std::string column;
  std::string detail;

  std::string to_string() const;
};

/// Outcome of validate(): empty issue list means the dataset is fit-ready.
struct ValidationReport {
  std::vector<ValidationIssue> issues;
  std::size_t rows = 0;
  std::size_t group_a_rows = 0;
  std::size_t group_b_rows = 0;
  std::size_t missing_group_rows = 0;

  bool ok() const { return issues.empty(); }
  std::string summary(std::size_t max_issues = 20) const;
};

/// Checks every model-relevant cell: unknown categorical levels, missing
/// values, non-numeric cells, non-positive outcomes under a log transform,
/// levels unobserved in one group (guaranteed rank failure), and per-group
/// row counts. Pure and idempotent; never throws on data problems.
ValidationReport validate(const Dataset& data, const ModelSpec& spec);

struct ListwiseResult {
  Dataset data;
  std::size_t dropped_rows = 0;
};

/// Listwise deletion: drops rows missing any model-relevant cell.
ListwiseResult listwise_delete(const Dataset& data, const ModelSpec& spec);

struct GroupSplit {
  Dataset group_a;
  Dataset group_b;
  std::size_t dropped_rows = 0;  // missing or unrecognized group value
};

/// Partitions rows by the group variable. Rows without a recognizable group
/// value are dropped and counted. Throws ValidationError if a group is empty.
GroupSplit split_groups(const Dataset& data, const ModelSpec& spec);

/// Strict finite-double parse of a full cell; nullopt when not numeric.
std::optional<double> parse_double(std::string_view text);

}  // namespace oaxaca
