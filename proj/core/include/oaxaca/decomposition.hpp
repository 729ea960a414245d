#pragma once

#include <string>
#include <vector>

#include "oaxaca/dataset.hpp"
#include "oaxaca/ols.hpp"

namespace oaxaca {

/// Which group's coefficient vector plays the non-discriminatory wage
/// structure. Female coefficients model pure discrimination against the
/// disadvantaged group; male coefficients model nepotism toward the
/// advantaged one.
enum class Reference { female_coefficients, male_coefficients };

const char* to_string(Reference ref);
Reference reference_from_string(std::string_view text);

struct TwofoldColumn {
  ColumnLabel label;
  double explained = 0.0;
  double unexplained = 0.0;
};

/// Twofold split of the mean outcome gap. With female reference:
///   explained  = a_f' (Xm - Xf),   unexplained = (a_m - a_f)' Xm
/// and with male reference:
///   explained  = a_m' (Xm - Xf),   unexplained = (a_m - a_f)' Xf
/// where a_g are fitted coefficients and Xg design-column means. Totals are
/// the exact sums of the per-column entries.
struct TwofoldResult {
  double gap = 0.0;  // a_m' Xm - a_f' Xf (fitted means)
  double explained = 0.0;
  double unexplained = 0.0;
  std::vector<TwofoldColumn> per_column;
  Reference reference = Reference::female_coefficients;
};

struct ThreefoldColumn {
  ColumnLabel label;
  double endowments = 0.0;
  double coefficients = 0.0;
  double interaction = 0.0;
};

/// Threefold split into endowments, coefficients (returns) and interaction.
/// With female reference:
///   E = a_f' dX,  C = da' Xf,  I = +da' dX
/// and with male reference:
///   E = a_m' dX,  C = da' Xm,  I = -da' dX
/// (dX = Xm - Xf, da = a_m - a_f). The interaction sign for the male
/// reference is forced by exact additivity E + C + I = gap.
struct ThreefoldResult {
  double gap = 0.0;
  double endowments = 0.0;
  double coefficients = 0.0;
  double interaction = 0.0;
  double discrimination = 0.0;          // coefficients + interaction
  double group_a_mean = 0.0;            // fitted mean outcome of group a
  double counterfactual_wage_a = 0.0;   // group_a_mean - discrimination
  std::vector<ThreefoldColumn> per_column;
  Reference reference = Reference::female_coefficients;

  /// Identity layer over already-computed components: derives gap,
  /// discrimination and the counterfactual wage. Used for reporting and for
  /// checking published aggregate tables.
  static ThreefoldResult from_components(double endowments, double coefficients,
                                         double interaction, double group_a_mean,
                                         Reference reference);
};

TwofoldResult twofold(const OlsFit& fit_a, const OlsFit& fit_b,
                      const MeanVector& means_a, const MeanVector& means_b,
                      Reference reference);

ThreefoldResult threefold(const OlsFit& fit_a, const OlsFit& fit_b,
                          const MeanVector& means_a, const MeanVector& means_b,
                          Reference reference);

/// One row of the per-variable detail table. Level rows carry one design
/// column each; categorical variables additionally get a subtotal row over
/// their dummy columns; the final row is the componentwise overall sum.
struct DetailRow {
  enum class Kind { intercept, term, variable_total, overall };
  Kind kind = Kind::term;
  std::string variable;
  std::string level;  // dummy rows only
  double endowments = 0.0;
  double coefficients = 0.0;
  double interaction = 0.0;
  double nepotism = 0.0;  // coefficients + interaction

  /// Stable key: "(Intercept)", "age", "education=primary", "education",
  /// "Overall".
  std::string key() const;
};

/// Aggregates per-column contributions by source variable in model order.
std::vector<DetailRow> detailed_by_variable(const ThreefoldResult& result,
                                            const ModelSpec& spec);

struct IdentityCheck {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double scaled_diff = 0.0;  // |lhs-rhs| / max(1, |lhs|, |rhs|)
  bool pass = false;
};

struct ConsistencyReport {
  std::vector<IdentityCheck> checks;
  bool ok() const;
  std::string summary() const;
};

/// Algebraic bridge between a twofold and a threefold result computed from
/// the same fits. When both use the same reference: explained = endowments
/// and unexplained = coefficients + interaction. When the references differ:
/// explained = endowments + interaction and unexplained = coefficients.
/// Also checks that both results agree on the gap and that each sums to it.
ConsistencyReport consistency_check(const TwofoldResult& two,
                                    const ThreefoldResult& three,
                                    double tolerance = 1e-9);

}  // namespace oaxaca
