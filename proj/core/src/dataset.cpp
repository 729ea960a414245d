#include "oaxaca/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

VariableSpec VariableSpec::make_continuous(std::string name) {
  VariableSpec v;
  v.name = std::move(name);
  v.kind = VariableKind::continuous;
  return v;
}

VariableSpec VariableSpec::make_categorical(std::string name,
                                            std::vector<std::string> levels,
                                            std::string reference) {
  VariableSpec v;
  v.name = std::move(name);
  v.kind = VariableKind::categorical;
  v.levels = std::move(levels);
  v.reference = std::move(reference);
  return v;
}

VariableSpec VariableSpec::make_squared(std::string name, std::string base) {
  VariableSpec v;
  v.name = std::move(name);
  v.kind = VariableKind::squared;
  v.base = std::move(base);
  return v;
}

std::vector<std::string> ModelSpec::used_columns() const {
  std::vector<std::string> cols{outcome, group_variable};
  for (const auto& pred : predictors) {
    if (pred.kind != VariableKind::squared) cols.push_back(pred.name);
  }
  return cols;
}

const VariableSpec* ModelSpec::find_predictor(std::string_view name) const {
  for (const auto& pred : predictors) {
    if (pred.name == name) return &pred;
  }
  return nullptr;
}

void ModelSpec::check() const {
  if (outcome.empty()) throw ConfigError("model: outcome column name is empty");
  if (group_variable.empty())
    throw ConfigError("model: group variable name is empty");
  if (group_a_label.empty() || group_b_label.empty())
    throw ConfigError("model: both group labels must be non-empty");
  if (group_a_label == group_b_label)
    throw ConfigError(
        fmt::format("model: group labels must differ, both are '{}'", group_a_label));

  std::unordered_set<std::string> names;
  for (const auto& pred : predictors) {
    if (pred.name.empty()) throw ConfigError("model: predictor with empty name");
    if (!names.insert(pred.name).second)
      throw ConfigError(fmt::format("model: duplicate predictor name '{}'", pred.name));
    if (pred.name == outcome || pred.name == group_variable)
      throw ConfigError(fmt::format(
          "model: predictor '{}' collides with the outcome or group column", pred.name));

    switch (pred.kind) {
      case VariableKind::continuous:
        break;
      case VariableKind::categorical: {
        if (pred.levels.size() < 2)
          throw ConfigError(fmt::format(
              "model: categorical '{}' needs at least 2 levels", pred.name));
        std::unordered_set<std::string> uniq(pred.levels.begin(), pred.levels.end());
        if (uniq.size() != pred.levels.size())
          throw ConfigError(
              fmt::format("model: categorical '{}' has duplicate levels", pred.name));
        if (uniq.find(pred.reference) == uniq.end())
          throw ConfigError(fmt::format(
              "model: reference level '{}' of '{}' is not among its levels",
              pred.reference, pred.name));
        break;
      }
      case VariableKind::squared: {
        const VariableSpec* base = find_predictor(pred.base);
        if (base == nullptr || base->kind != VariableKind::continuous)
          throw ConfigError(fmt::format(
              "model: squared predictor '{}' must name a continuous predictor "
              "as its base, got '{}'",
              pred.name, pred.base));
        break;
      }
    }
  }
}

std::optional<std::size_t> Dataset::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  return std::nullopt;
}

std::optional<double> parse_double(std::string_view text) {
  if (text.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  if (!std::isfinite(value)) return std::nullopt;
  return value;
}

std::string ValidationIssue::to_string() const {
  std::string where = column;
  if (row.has_value()) where = fmt::format("row {}, column '{}'", *row, column);
  switch (kind) {
    case Kind::unknown_column:
      return fmt::format("column '{}' not found in the dataset", column);
    case Kind::missing_value:
      return fmt::format("{}: missing value", where);
    case Kind::bad_numeric:
      return fmt::format("{}: not a finite number ({})", where, detail);
    case Kind::unknown_level:
      return fmt::format("{}: level '{}' is not declared", where, detail);
    case Kind::unobserved_level:
      return fmt::format("column '{}': {}", column, detail);
    case Kind::nonpositive_outcome:
      return fmt::format("{}: non-positive outcome under log transform ({})",
                         where, detail);
    case Kind::unknown_group_label:
      return fmt::format("{}: group value '{}' matches neither group label",
                         where, detail);
    case Kind::empty_group:
      return fmt::format("group '{}' has no rows", detail);
  }
  return detail;
}

std::string ValidationReport::summary(std::size_t max_issues) const {
  std::ostringstream out;
  out << fmt::format("validation: {} issue(s); rows={} group_a={} group_b={}",
                     issues.size(), rows, group_a_rows, group_b_rows);
  if (missing_group_rows > 0)
    out << fmt::format(" missing_group={}", missing_group_rows);
  const std::size_t shown = std::min(max_issues, issues.size());
  for (std::size_t i = 0; i < shown; ++i) out << "\n  - " << issues[i].to_string();
  if (issues.size() > shown)
    out << fmt::format("\n  ... and {} more", issues.size() - shown);
  return out.str();
}

namespace {

struct ResolvedColumns {
  std::optional<std::size_t> outcome;
  std::optional<std::size_t> group;
  // predictor index -> dataset column (nullopt for squared or unknown)
  std::vector<std::optional<std::size_t>> predictors;
};

ResolvedColumns resolve(const Dataset& data, const ModelSpec& spec,
                        ValidationReport* report) {
  ResolvedColumns cols;
  auto lookup = [&](const std::string& name) -> std::optional<std::size_t> {
    auto idx = data.column_index(name);
    if (!idx && report != nullptr)
      report->issues.push_back(
          {ValidationIssue::Kind::unknown_column, std::nullopt, name, ""});
    return idx;
  };
  cols.outcome = lookup(spec.outcome);
  cols.group = lookup(spec.group_variable);
  cols.predictors.reserve(spec.predictors.size());
  for (const auto& pred : spec.predictors) {
    if (pred.kind == VariableKind::squared) {
      cols.predictors.push_back(std::nullopt);  // derived from its base
    } else {
      cols.predictors.push_back(lookup(pred.name));
    }
  }
  return cols;
}

}  // namespace

ValidationReport validate(const Dataset& data, const ModelSpec& spec) {
  spec.check();
  ValidationReport report;
  report.rows = data.n_rows();
  ResolvedColumns cols = resolve(data, spec, &report);

  // Per-group observation counts of each declared level; a level unseen in
  // one group guarantees a zero dummy column and a rank failure there.
  std::vector<std::unordered_map<std::string, std::array<std::size_t, 2>>>
      level_counts(spec.predictors.size());

  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    int group = -1;  // 0 = a, 1 = b
    if (cols.group) {
      const auto& cell = data.cell(r, *cols.group);
      if (!cell.has_value()) {
        ++report.missing_group_rows;
        report.issues.push_back({ValidationIssue::Kind::missing_value, r,
                                 spec.group_variable, ""});
      } else if (*cell == spec.group_a_label) {
        group = 0;
        ++report.group_a_rows;
      } else if (*cell == spec.group_b_label) {
        group = 1;
        ++report.group_b_rows;
      } else {
        report.issues.push_back({ValidationIssue::Kind::unknown_group_label, r,
                                 spec.group_variable, *cell});
      }
    }

    if (cols.outcome) {
      const auto& cell = data.cell(r, *cols.outcome);
      if (!cell.has_value()) {
        report.issues.push_back(
            {ValidationIssue::Kind::missing_value, r, spec.outcome, ""});
      } else {
        auto value = parse_double(*cell);
        if (!value) {
          report.issues.push_back(
              {ValidationIssue::Kind::bad_numeric, r, spec.outcome, *cell});
        } else if (spec.transform == OutcomeTransform::log && *value <= 0.0) {
          report.issues.push_back({ValidationIssue::Kind::nonpositive_outcome, r,
                                   spec.outcome, *cell});
        }
      }
    }

    for (std::size_t p = 0; p < spec.predictors.size(); ++p) {
      const auto& pred = spec.predictors[p];
      if (!cols.predictors[p]) continue;
      const auto& cell = data.cell(r, *cols.predictors[p]);
      if (!cell.has_value()) {
        report.issues.push_back(
            {ValidationIssue::Kind::missing_value, r, pred.name, ""});
        continue;
      }
      if (pred.kind == VariableKind::continuous) {
        if (!parse_double(*cell))
          report.issues.push_back(
              {ValidationIssue::Kind::bad_numeric, r, pred.name, *cell});
      } else if (pred.kind == VariableKind::categorical) {
        if (std::find(pred.levels.begin(), pred.levels.end(), *cell) ==
            pred.levels.end()) {
          report.issues.push_back(
              {ValidationIssue::Kind::unknown_level, r, pred.name, *cell});
        } else if (group >= 0) {
          ++level_counts[p][*cell][static_cast<std::size_t>(group)];
        }
      }
    }
  }

  if (report.group_a_rows == 0)
    report.issues.push_back({ValidationIssue::Kind::empty_group, std::nullopt,
                             spec.group_variable, spec.group_a_label});
  if (report.group_b_rows == 0)
    report.issues.push_back({ValidationIssue::Kind::empty_group, std::nullopt,
                             spec.group_variable, spec.group_b_label});

  for (std::size_t p = 0; p < spec.predictors.size(); ++p) {
    const auto& pred = spec.predictors[p];
    if (pred.kind != VariableKind::categorical || !cols.predictors[p]) continue;
    if (report.group_a_rows == 0 || report.group_b_rows == 0) break;
    for (const auto& level : pred.levels) {
      const auto it = level_counts[p].find(level);
      const std::size_t in_a = it == level_counts[p].end() ? 0 : (*it).second[0];
      const std::size_t in_b = it == level_counts[p].end() ? 0 : (*it).second[1];
      if (in_a == 0 && level != pred.reference)
        report.issues.push_back(
            {ValidationIssue::Kind::unobserved_level, std::nullopt, pred.name,
             fmt::format("level '{}' has no observations in group '{}'", level,
                         spec.group_a_label)});
      if (in_b == 0 && level != pred.reference)
        report.issues.push_back(
            {ValidationIssue::Kind::unobserved_level, std::nullopt, pred.name,
             fmt::format("level '{}' has no observations in group '{}'", level,
                         spec.group_b_label)});
    }
  }

  return report;
}

ListwiseResult listwise_delete(const Dataset& data, const ModelSpec& spec) {
  spec.check();
  std::vector<std::size_t> used;
  for (const auto& name : spec.used_columns()) {
    if (auto idx = data.column_index(name)) used.push_back(*idx);
  }
  ListwiseResult result;
  result.data.columns = data.columns;
  result.data.rows.reserve(data.n_rows());
  for (const auto& row : data.rows) {
    const bool complete = std::all_of(used.begin(), used.end(),
                                      [&](std::size_t c) { return row[c].has_value(); });
    if (complete) {
      result.data.rows.push_back(row);
    } else {
      ++result.dropped_rows;
    }
  }
  return result;
}

GroupSplit split_groups(const Dataset& data, const ModelSpec& spec) {
  spec.check();
  const auto group_col = data.column_index(spec.group_variable);
  if (!group_col)
    throw ValidationError(fmt::format("split: group column '{}' not found",
                                      spec.group_variable));
  GroupSplit split;
  split.group_a.columns = data.columns;
  split.group_b.columns = data.columns;
  for (const auto& row : data.rows) {
    const auto& cell = row[*group_col];
    if (cell.has_value() && *cell == spec.group_a_label) {
      split.group_a.rows.push_back(row);
    } else if (cell.has_value() && *cell == spec.group_b_label) {
      split.group_b.rows.push_back(row);
    } else {
      ++split.dropped_rows;
    }
  }
  if (split.group_a.n_rows() == 0)
    throw ValidationError(
        fmt::format("split: empty group '{}'", spec.group_a_label));
  if (split.group_b.n_rows() == 0)
    throw ValidationError(
        fmt::format("split: empty group '{}'", spec.group_b_label));
  return split;
}

}  // namespace oaxaca
