#include "oaxaca/mca.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

double McaModel::first_inertia() const {
  return singular_values.empty() ? 0.0
                                 : singular_values.front() * singular_values.front();
}

std::optional<double> McaModel::coordinate(std::string_view variable,
                                           std::string_view level) const {
  for (std::size_t j = 0; j < categories.size(); ++j) {
    if (categories[j].variable == variable && categories[j].level == level)
      return coordinates(static_cast<Eigen::Index>(j));
  }
  return std::nullopt;
}

namespace {

struct IndicatorLayout {
  std::vector<std::size_t> data_columns;            // per variable
  std::vector<std::vector<std::string>> levels;     // observed, per variable
  std::vector<std::map<std::string, std::size_t>> level_to_column;
  std::size_t total_levels = 0;
};

IndicatorLayout layout_indicator(const Dataset& data,
                                 const std::vector<VariableSpec>& variables) {
  if (variables.size() < 2)
    throw ValidationError("mca: at least 2 categorical variables are required");
  IndicatorLayout layout;
  for (const auto& var : variables) {
    if (var.kind != VariableKind::categorical)
      throw ValidationError(
          fmt::format("mca: variable '{}' is not categorical", var.name));
    auto idx = data.column_index(var.name);
    if (!idx)
      throw ValidationError(fmt::format("mca: column '{}' not found", var.name));
    layout.data_columns.push_back(*idx);

    std::vector<std::string> observed;
    if (var.levels.empty()) {
      // Level set discovered from the data, sorted for stability.
      std::set<std::string> seen;
      for (std::size_t r = 0; r < data.n_rows(); ++r) {
        const auto& cell = data.cell(r, *idx);
        if (!cell.has_value())
          throw ValidationError(fmt::format(
              "mca: row {}, column '{}': missing value", r, var.name));
        seen.insert(*cell);
      }
      observed.assign(seen.begin(), seen.end());
    } else {
      std::map<std::string, std::size_t> counts;
      for (std::size_t r = 0; r < data.n_rows(); ++r) {
        const auto& cell = data.cell(r, *idx);
        if (!cell.has_value())
          throw ValidationError(fmt::format(
              "mca: row {}, column '{}': missing value", r, var.name));
        if (std::find(var.levels.begin(), var.levels.end(), *cell) ==
            var.levels.end())
          throw ValidationError(
              fmt::format("mca: row {}, column '{}': level '{}' is not declared",
                          r, var.name, *cell));
        ++counts[*cell];
      }
      for (const auto& level : var.levels) {
        if (counts.count(level) > 0) observed.push_back(level);
      }
    }
    if (observed.size() < 2)
      throw ValidationError(fmt::format(
          "mca: variable '{}' has fewer than 2 observed levels", var.name));

    std::map<std::string, std::size_t> mapping;
    for (const auto& level : observed)
      mapping.emplace(level, layout.total_levels++);
    layout.levels.push_back(std::move(observed));
    layout.level_to_column.push_back(std::move(mapping));
  }
  return layout;
}

}  // namespace

McaModel fit_mca(const Dataset& data, const std::vector<VariableSpec>& variables,
                 const McaOptions& options) {
  const std::size_t n = data.n_rows();
  if (n == 0) throw ValidationError("mca: empty dataset");
  IndicatorLayout layout = layout_indicator(data, variables);
  const std::size_t n_cats = layout.total_levels;
  const double q = static_cast<double>(variables.size());

  // Category column of every (row, variable) pair.
  std::vector<std::size_t> cells(n * variables.size());
  std::vector<double> counts(n_cats, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t v = 0; v < variables.size(); ++v) {
      const auto& cell = data.cell(r, layout.data_columns[v]);
      const std::size_t j = layout.level_to_column[v].at(*cell);
      cells[r * variables.size() + v] = j;
      counts[j] += 1.0;
    }
  }

  // Standardized residuals of the indicator correspondence matrix
  // P = Z / (n q) under the independence model r c'.
  const double grand_total = static_cast<double>(n) * q;
  const double row_mass = 1.0 / static_cast<double>(n);
  std::vector<double> column_masses(n_cats);
  for (std::size_t j = 0; j < n_cats; ++j)
    column_masses[j] = counts[j] / grand_total;

  Eigen::MatrixXd residuals(static_cast<Eigen::Index>(n),
                            static_cast<Eigen::Index>(n_cats));
  for (std::size_t j = 0; j < n_cats; ++j) {
    const double expected = row_mass * column_masses[j];
    residuals.col(static_cast<Eigen::Index>(j))
        .setConstant(-expected / std::sqrt(expected));
  }
  // Rows holding a category overwrite the "absent" residual.
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t v = 0; v < variables.size(); ++v) {
      const std::size_t j = cells[r * variables.size() + v];
      const double expected = row_mass * column_masses[j];
      residuals(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(j)) =
          (1.0 / grand_total - expected) / std::sqrt(expected);
    }
  }

  if (residuals.norm() == 0.0)
    throw NumericError("mca: degenerate data (all rows identical)");

  Eigen::BDCSVD<Eigen::MatrixXd> svd(residuals, Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();

  McaModel model;
  model.n_variables = variables.size();
  model.n_rows_fit = n;
  model.column_masses = column_masses;
  model.total_inertia = sigma.array().square().sum();

  const double sv_floor = sigma.size() > 0 ? sigma(0) * 1e-12 : 0.0;
  for (Eigen::Index d = 0; d < sigma.size(); ++d) {
    if (sigma(d) > sv_floor) model.singular_values.push_back(sigma(d));
  }
  if (model.singular_values.empty())
    throw NumericError("mca: no non-trivial dimension (degenerate data)");

  for (std::size_t v = 0; v < variables.size(); ++v) {
    for (const auto& level : layout.levels[v])
      model.categories.push_back({variables[v].name, level});
  }
  model.coordinates.resize(static_cast<Eigen::Index>(n_cats));
  for (std::size_t j = 0; j < n_cats; ++j) {
    // Column standard coordinate on dimension 1.
    model.coordinates(static_cast<Eigen::Index>(j)) =
        svd.matrixV()(static_cast<Eigen::Index>(j), 0) /
        std::sqrt(column_masses[j]);
  }

  // Sign convention: the designated high-asset anchor gets a positive
  // coordinate; without an anchor, the largest-magnitude category does.
  double anchor_value = 0.0;
  if (options.positive_anchor.has_value()) {
    const auto& anchor = *options.positive_anchor;
    auto value = model.coordinate(anchor.variable, anchor.level);
    if (!value)
      throw ValidationError(fmt::format(
          "mca: anchor category '{}={}' was not observed", anchor.variable,
          anchor.level));
    anchor_value = *value;
  } else {
    Eigen::Index largest = 0;
    model.coordinates.cwiseAbs().maxCoeff(&largest);
    anchor_value = model.coordinates(largest);
  }
  if (anchor_value < 0.0) model.coordinates = -model.coordinates;

  return model;
}

Eigen::VectorXd score_individuals(const McaModel& model, const Dataset& data) {
  // coordinate lookups by (variable, level)
  std::map<std::pair<std::string, std::string>, double> table;
  for (std::size_t j = 0; j < model.categories.size(); ++j)
    table.emplace(std::make_pair(model.categories[j].variable,
                                 model.categories[j].level),
                  model.coordinates(static_cast<Eigen::Index>(j)));

  std::vector<std::string> variables;
  for (const auto& category : model.categories) {
    if (variables.empty() || variables.back() != category.variable)
      variables.push_back(category.variable);
  }

  std::vector<std::size_t> columns;
  for (const auto& name : variables) {
    auto idx = data.column_index(name);
    if (!idx)
      throw ValidationError(fmt::format("score: column '{}' not found", name));
    columns.push_back(*idx);
  }

  Eigen::VectorXd scores(static_cast<Eigen::Index>(data.n_rows()));
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    double sum = 0.0;
    for (std::size_t v = 0; v < variables.size(); ++v) {
      const auto& cell = data.cell(r, columns[v]);
      if (!cell.has_value())
        throw ValidationError(fmt::format(
            "score: row {}, column '{}': missing value", r, variables[v]));
      auto it = table.find(std::make_pair(variables[v], *cell));
      if (it == table.end())
        throw ValidationError(
            fmt::format("score: row {}, column '{}': unseen level '{}'", r,
                        variables[v], *cell));
      sum += it->second;
    }
    scores(static_cast<Eigen::Index>(r)) =
        sum / static_cast<double>(model.n_variables);
  }
  return scores;
}

}  // namespace oaxaca
