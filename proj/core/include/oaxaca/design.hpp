#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "oaxaca/dataset.hpp"

namespace oaxaca {

/// Identifies what a design column encodes: the intercept, a continuous or
/// squared predictor, or one dummy level of a categorical predictor.
struct ColumnLabel {
  enum class Kind { intercept, continuous, squared, dummy };
  Kind kind = Kind::intercept;
  std::string variable;  // empty for the intercept
  std::string level;     // dummy only

  /// "(Intercept)", "age", "education=primary"
  std::string text() const;

  friend bool operator==(const ColumnLabel&, const ColumnLabel&) = default;
};

/// Intercept-first numeric design matrix with labeled columns.
struct DesignMatrix {
  Eigen::MatrixXd values;           // n x (k+1); column 0 is all ones
  std::vector<ColumnLabel> labels;  // size k+1

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index cols() const { return values.cols(); }
};

struct MeanVector {
  Eigen::VectorXd values;  // first entry is exactly 1
  std::vector<ColumnLabel> labels;
};

struct DesignResult {
  DesignMatrix design;
  Eigen::VectorXd outcome;
};

/// Expands a group-filtered dataset into the design matrix and transformed
/// outcome vector: intercept first, then predictors in declared order with
/// one dummy column per non-reference level and squared terms materialized
/// as explicit columns. Deterministic: identical inputs give bit-identical
/// matrices.
DesignResult build_design(const Dataset& data, const ModelSpec& spec);

/// Arithmetic column means. Throws NumericError on an empty matrix.
MeanVector column_means(const DesignMatrix& design);

}  // namespace oaxaca
