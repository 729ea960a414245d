#include "oaxaca/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/math/distributions/fisher_f.hpp>
#include <boost/math/distributions/students_t.hpp>
#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

namespace {
// Relative diagonal tolerance of the pivoted factorization used for rank
// detection.
constexpr double kRankTolerance = 1e-10;
}  // namespace

double OlsFit::std_error(Eigen::Index i) const {
  return std::sqrt(std::max(0.0, vcov(i, i)));
}

double OlsFit::t_value(Eigen::Index i) const {
  const double se = std_error(i);
  if (se == 0.0) {
    if (coefficients(i) == 0.0) return 0.0;
    return coefficients(i) > 0 ? std::numeric_limits<double>::infinity()
                               : -std::numeric_limits<double>::infinity();
  }
  return coefficients(i) / se;
}

double OlsFit::p_value(Eigen::Index i) const {
  const double se = std_error(i);
  if (se == 0.0) return coefficients(i) == 0.0 ? 1.0 : 0.0;
  const boost::math::students_t dist(df_residual());
  const double t = std::abs(coefficients(i) / se);
  return 2.0 * boost::math::cdf(boost::math::complement(dist, t));
}

OlsFit fit_ols(const DesignMatrix& design, const Eigen::VectorXd& outcome) {
  const Eigen::Index n = design.n();
  const Eigen::Index p = design.cols();
  if (outcome.size() != n)
    throw NumericError(fmt::format(
        "fit: outcome length {} does not match design rows {}", outcome.size(), n));
  if (n <= p)
    throw NumericError(fmt::format(
        "fit: {} observations cannot identify {} coefficients (need n > k+1)", n, p));

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design.values);
  qr.setThreshold(kRankTolerance);
  const Eigen::Index rank = qr.rank();
  if (rank < p) {
    // The trailing pivot positions are the columns that failed the
    // threshold, i.e. are (numerically) linear combinations of the rest.
    const auto& perm = qr.colsPermutation().indices();
    std::string dependent;
    for (Eigen::Index j = rank; j < p; ++j) {
      if (!dependent.empty()) dependent += ", ";
      dependent += design.labels[static_cast<std::size_t>(perm(j))].text();
    }
    throw NumericError(fmt::format(
        "fit: rank-deficient design (rank {} of {}); dependent columns: {}",
        rank, p, dependent));
  }

  OlsFit fit;
  fit.n = static_cast<std::size_t>(n);
  fit.labels = design.labels;
  fit.coefficients = qr.solve(outcome);

  const Eigen::VectorXd residuals = outcome - design.values * fit.coefficients;
  const double rss = residuals.squaredNorm();
  const double df = static_cast<double>(n - p);
  const double sigma2 = rss / df;
  fit.residual_std_error = std::sqrt(sigma2);

  // X P = Q R  =>  (X'X)^-1 = P (R'R)^-1 P'
  const Eigen::MatrixXd r_factor = qr.matrixR()
                                       .topLeftCorner(p, p)
                                       .template triangularView<Eigen::Upper>();
  const Eigen::MatrixXd r_inverse =
      r_factor.triangularView<Eigen::Upper>().solve(
          Eigen::MatrixXd::Identity(p, p));
  Eigen::MatrixXd xtx_inverse = r_inverse * r_inverse.transpose();
  xtx_inverse = qr.colsPermutation() * xtx_inverse *
                qr.colsPermutation().transpose();
  fit.vcov = sigma2 * xtx_inverse;
  fit.vcov = ((fit.vcov + fit.vcov.transpose()) / 2.0).eval();

  const double mean = outcome.mean();
  const double tss = (outcome.array() - mean).square().sum();
  double r2;
  if (tss > 0.0) {
    r2 = 1.0 - rss / tss;
  } else {
    r2 = rss == 0.0 ? 1.0 : 0.0;
  }
  fit.r_squared = std::clamp(r2, 0.0, 1.0);
  fit.adj_r_squared =
      1.0 - (1.0 - fit.r_squared) * (static_cast<double>(n) - 1.0) / df;

  const double k = static_cast<double>(p - 1);
  fit.f_statistic.df1 = k;
  fit.f_statistic.df2 = df;
  if (k > 0.0) {
    if (fit.r_squared < 1.0) {
      fit.f_statistic.value = (fit.r_squared / k) / ((1.0 - fit.r_squared) / df);
    } else {
      fit.f_statistic.value = std::numeric_limits<double>::infinity();
    }
  } else {
    fit.f_statistic.value = std::numeric_limits<double>::quiet_NaN();
  }

  return fit;
}

std::vector<Interval> coefficient_intervals(const OlsFit& fit, double level) {
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument(
        fmt::format("coefficient_intervals: level {} not in (0, 1)", level));
  const double quantile =
      student_t_quantile(1.0 - (1.0 - level) / 2.0, fit.df_residual());
  std::vector<Interval> intervals;
  intervals.reserve(static_cast<std::size_t>(fit.coefficients.size()));
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
    const double margin = quantile * fit.std_error(i);
    intervals.push_back({fit.coefficients(i) - margin, fit.coefficients(i) + margin});
  }
  return intervals;
}

std::string significance_stars(double p_value) {
  if (p_value < 0.01) return "***";
  if (p_value < 0.05) return "**";
  if (p_value < 0.1) return "*";
  return "";
}

std::vector<std::string> significance_stars(const OlsFit& fit) {
  std::vector<std::string> stars;
  stars.reserve(static_cast<std::size_t>(fit.coefficients.size()));
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i)
    stars.push_back(significance_stars(fit.p_value(i)));
  return stars;
}

double student_t_quantile(double probability, double df) {
  const boost::math::students_t dist(df);
  return boost::math::quantile(dist, probability);
}

double f_statistic_p_value(const FStatistic& f) {
  if (!(f.df1 > 0.0) || !(f.df2 > 0.0) || std::isnan(f.value))
    return std::numeric_limits<double>::quiet_NaN();
  if (std::isinf(f.value)) return 0.0;
  const boost::math::fisher_f dist(f.df1, f.df2);
  return boost::math::cdf(boost::math::complement(dist, f.value));
}

}  // namespace oaxaca
