#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "oaxaca/design.hpp"

namespace oaxaca {

struct FStatistic {
  double value = 0.0;  // NaN for an intercept-only model
  double df1 = 0.0;
  double df2 = 0.0;
};

/// One group's fitted wage equation with classical (homoskedastic)
/// covariance and the usual summary statistics.
struct OlsFit {
  Eigen::VectorXd coefficients;
  Eigen::MatrixXd vcov;  // sigma^2 (X'X)^-1, symmetric PSD
  double residual_std_error = 0.0;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  FStatistic f_statistic;
  std::size_t n = 0;
  std::vector<ColumnLabel> labels;

  double df_residual() const {
    return static_cast<double>(n) - static_cast<double>(coefficients.size());
  }
  double std_error(Eigen::Index i) const;
  double t_value(Eigen::Index i) const;
  /// Two-sided p-value of the t test against zero.
  double p_value(Eigen::Index i) const;
};

/// Least-squares fit via column-pivoted Householder QR; the normal equations
/// are never formed. Requires n > columns and a full-rank design; on rank
/// deficiency the error names the columns that failed the pivot threshold.
OlsFit fit_ols(const DesignMatrix& design, const Eigen::VectorXd& outcome);

struct Interval {
  double low = 0.0;
  double high = 0.0;
};

/// Symmetric Student-t confidence intervals at the given level.
std::vector<Interval> coefficient_intervals(const OlsFit& fit, double level);

/// "***" p<0.01, "**" p<0.05, "*" p<0.1, "" otherwise.
std::string significance_stars(double p_value);
std::vector<std::string> significance_stars(const OlsFit& fit);

/// Student-t quantile with the given degrees of freedom.
double student_t_quantile(double probability, double df);

/// Upper tail probability of the F distribution (for the overall F test).
double f_statistic_p_value(const FStatistic& f);

}  // namespace oaxaca
