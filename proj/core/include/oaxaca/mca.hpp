#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "oaxaca/dataset.hpp"

namespace oaxaca {

struct McaCategory {
  std::string variable;
  std::string level;
  friend bool operator==(const McaCategory&, const McaCategory&) = default;
};

struct McaOptions {
  /// Category whose dimension-1 coordinate is forced positive, so that high
  /// scores read as high socioeconomic level. Defaults to the category with
  /// the largest absolute coordinate.
  std::optional<McaCategory> positive_anchor;
};

/// Multiple correspondence analysis of the complete-disjunctive indicator
/// matrix, dimension 1 retained. Coordinates are column standard
/// coordinates; an individual's score is its dimension-1 row principal
/// coordinate, i.e. the average of its categories' standard coordinates.
struct McaModel {
  std::vector<McaCategory> categories;  // variable order, observed level order
  Eigen::VectorXd coordinates;          // dimension-1 standard coordinates
  std::vector<double> singular_values;  // descending, non-trivial
  double total_inertia = 0.0;
  std::vector<double> column_masses;
  std::size_t n_variables = 0;
  std::size_t n_rows_fit = 0;

  std::optional<double> coordinate(std::string_view variable,
                                   std::string_view level) const;
  /// Principal inertia of dimension 1 (= first squared singular value);
  /// equals the variance of the fitting-sample scores.
  double first_inertia() const;
};

/// Fits the MCA on complete rows of the selected categorical variables.
/// Variables with declared levels are validated strictly; variables declared
/// without levels have their level sets discovered from the data (sorted).
/// Requires >= 2 variables, each with >= 2 observed levels, and no missing
/// cells among the selected columns.
McaModel fit_mca(const Dataset& data, const std::vector<VariableSpec>& variables,
                 const McaOptions& options = {});

/// Dimension-1 score per row. Unseen levels and missing cells are errors
/// naming the row. Scoring the fitting sample gives mean-zero scores whose
/// variance equals the first principal inertia.
Eigen::VectorXd score_individuals(const McaModel& model, const Dataset& data);

}  // namespace oaxaca
