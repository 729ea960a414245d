#include "oaxaca/design.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

std::string ColumnLabel::text() const {
  switch (kind) {
    case Kind::intercept:
      return "(Intercept)";
    case Kind::continuous:
    case Kind::squared:
      return variable;
    case Kind::dummy:
      return fmt::format("{}={}", variable, level);
  }
  return variable;
}

namespace {

std::vector<ColumnLabel> make_labels(const ModelSpec& spec) {
  std::vector<ColumnLabel> labels;
  labels.push_back({ColumnLabel::Kind::intercept, "", ""});
  for (const auto& pred : spec.predictors) {
    switch (pred.kind) {
      case VariableKind::continuous:
        labels.push_back({ColumnLabel::Kind::continuous, pred.name, ""});
        break;
      case VariableKind::squared:
        labels.push_back({ColumnLabel::Kind::squared, pred.name, ""});
        break;
      case VariableKind::categorical:
        for (const auto& level : pred.levels) {
          if (level == pred.reference) continue;
          labels.push_back({ColumnLabel::Kind::dummy, pred.name, level});
        }
        break;
    }
  }
  return labels;
}

}  // namespace

DesignResult build_design(const Dataset& data, const ModelSpec& spec) {
  spec.check();
  const std::size_t n = data.n_rows();

  // Resolve and parse source columns once; squared terms read their base's
  // parsed values.
  std::unordered_map<std::string, std::vector<double>> numeric_columns;
  std::unordered_map<std::string, std::size_t> categorical_columns;
  auto require_column = [&](const std::string& name) -> std::size_t {
    auto idx = data.column_index(name);
    if (!idx)
      throw ValidationError(fmt::format("design: column '{}' not found", name));
    return *idx;
  };
  auto parse_numeric = [&](const std::string& name) {
    if (numeric_columns.count(name) > 0) return;
    const std::size_t col = require_column(name);
    std::vector<double> values(n);
    for (std::size_t r = 0; r < n; ++r) {
      const auto& cell = data.cell(r, col);
      if (!cell.has_value())
        throw ValidationError(
            fmt::format("design: row {}, column '{}': missing value", r, name));
      auto value = parse_double(*cell);
      if (!value)
        throw ValidationError(fmt::format(
            "design: row {}, column '{}': not a finite number ({})", r, name, *cell));
      values[r] = *value;
    }
    numeric_columns.emplace(name, std::move(values));
  };

  for (const auto& pred : spec.predictors) {
    switch (pred.kind) {
      case VariableKind::continuous:
        parse_numeric(pred.name);
        break;
      case VariableKind::squared:
        parse_numeric(pred.base);
        break;
      case VariableKind::categorical:
        categorical_columns.emplace(pred.name, require_column(pred.name));
        break;
    }
  }

  DesignResult result;
  result.design.labels = make_labels(spec);
  const std::size_t k1 = result.design.labels.size();
  result.design.values.resize(static_cast<Eigen::Index>(n),
                              static_cast<Eigen::Index>(k1));
  result.design.values.col(0).setOnes();

  std::size_t col = 1;
  for (const auto& pred : spec.predictors) {
    switch (pred.kind) {
      case VariableKind::continuous: {
        const auto& values = numeric_columns.at(pred.name);
        for (std::size_t r = 0; r < n; ++r)
          result.design.values(static_cast<Eigen::Index>(r),
                               static_cast<Eigen::Index>(col)) = values[r];
        ++col;
        break;
      }
      case VariableKind::squared: {
        const auto& values = numeric_columns.at(pred.base);
        for (std::size_t r = 0; r < n; ++r) {
          const double v = values[r];
          result.design.values(static_cast<Eigen::Index>(r),
                               static_cast<Eigen::Index>(col)) = v * v;
        }
        ++col;
        break;
      }
      case VariableKind::categorical: {
        const std::size_t src = categorical_columns.at(pred.name);
        const std::size_t first = col;
        std::unordered_map<std::string, std::size_t> level_to_col;
        for (const auto& level : pred.levels) {
          if (level == pred.reference) continue;
          level_to_col.emplace(level, col++);
        }
        for (std::size_t r = 0; r < n; ++r) {
          const auto& cell = data.cell(r, src);
          if (!cell.has_value())
            throw ValidationError(fmt::format(
                "design: row {}, column '{}': missing value", r, pred.name));
          for (std::size_t c = first; c < col; ++c)
            result.design.values(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(c)) = 0.0;
          auto it = level_to_col.find(*cell);
          if (it != level_to_col.end()) {
            result.design.values(static_cast<Eigen::Index>(r),
                                 static_cast<Eigen::Index>(it->second)) = 1.0;
          } else if (*cell != pred.reference) {
            throw ValidationError(fmt::format(
                "design: row {}, column '{}': level '{}' is not declared", r,
                pred.name, *cell));
          }
        }
        break;
      }
    }
  }

  // Outcome, transformed per the model.
  const std::size_t outcome_col = require_column(spec.outcome);
  result.outcome.resize(static_cast<Eigen::Index>(n));
  for (std::size_t r = 0; r < n; ++r) {
    const auto& cell = data.cell(r, outcome_col);
    if (!cell.has_value())
      throw ValidationError(fmt::format(
          "design: row {}, column '{}': missing outcome", r, spec.outcome));
    auto value = parse_double(*cell);
    if (!value)
      throw ValidationError(fmt::format(
          "design: row {}, column '{}': not a finite number ({})", r,
          spec.outcome, *cell));
    if (spec.transform == OutcomeTransform::log) {
      if (*value <= 0.0)
        throw ValidationError(fmt::format(
            "design: row {}: non-positive outcome {} under log transform", r,
            *cell));
      result.outcome(static_cast<Eigen::Index>(r)) = std::log(*value);
    } else {
      result.outcome(static_cast<Eigen::Index>(r)) = *value;
    }
  }

  return result;
}

MeanVector column_means(const DesignMatrix& design) {
  if (design.n() == 0) throw NumericError("column_means: empty design matrix");
  MeanVector means;
  means.values = design.values.colwise().mean();
  means.labels = design.labels;
  return means;
}

}  // namespace oaxaca
