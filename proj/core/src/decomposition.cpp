#include "oaxaca/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"

namespace oaxaca {

const char* to_string(Reference ref) {
  return ref == Reference::female_coefficients ? "female" : "male";
}

Reference reference_from_string(std::string_view text) {
  if (text == "female") return Reference::female_coefficients;
  if (text == "male") return Reference::male_coefficients;
  throw ConfigError(fmt::format(
      "reference must be 'female' or 'male', got '{}'", std::string(text)));
}

namespace {

void check_aligned(const OlsFit& fit_a, const OlsFit& fit_b,
                   const MeanVector& means_a, const MeanVector& means_b) {
  const auto& labels = fit_a.labels;
  auto mismatch = [&](const std::vector<ColumnLabel>& other) {
    std::string diverging;
    const std::size_t common = std::min(labels.size(), other.size());
    for (std::size_t i = 0; i < common; ++i) {
      if (labels[i] == other[i]) continue;
      if (!diverging.empty()) diverging += ", ";
      diverging += fmt::format("{} vs {}", labels[i].text(), other[i].text());
    }
    if (labels.size() != other.size())
      diverging += fmt::format("{}column count {} vs {}",
                               diverging.empty() ? "" : "; ", labels.size(),
                               other.size());
    return diverging;
  };
  for (const auto* other : {&fit_b.labels, &means_a.labels, &means_b.labels}) {
    const std::string diverging = mismatch(*other);
    if (!diverging.empty())
      throw ValidationError(
          fmt::format("decomposition: column labels differ: {}", diverging));
  }
}

}  // namespace

TwofoldResult twofold(const OlsFit& fit_a, const OlsFit& fit_b,
                      const MeanVector& means_a, const MeanVector& means_b,
                      Reference reference) {
  check_aligned(fit_a, fit_b, means_a, means_b);
  const Eigen::Index k1 = fit_a.coefficients.size();

  const bool female = reference == Reference::female_coefficients;
  const Eigen::VectorXd& ref_coef =
      female ? fit_b.coefficients : fit_a.coefficients;
  // The coefficient differences are valued at the other group's means.
  const Eigen::VectorXd& eval_means = female ? means_a.values : means_b.values;

  TwofoldResult result;
  result.reference = reference;
  result.per_column.reserve(static_cast<std::size_t>(k1));
  for (Eigen::Index j = 0; j < k1; ++j) {
    const double d_mean = means_a.values(j) - means_b.values(j);
    const double d_coef = fit_a.coefficients(j) - fit_b.coefficients(j);
    TwofoldColumn column;
    column.label = fit_a.labels[static_cast<std::size_t>(j)];
    column.explained = ref_coef(j) * d_mean;
    column.unexplained = d_coef * eval_means(j);
    result.per_column.push_back(column);
  }
  // Totals are the exact sums of the per-column entries.
  for (const auto& column : result.per_column) {
    result.explained += column.explained;
    result.unexplained += column.unexplained;
  }
  result.gap = fit_a.coefficients.dot(means_a.values) -
               fit_b.coefficients.dot(means_b.values);
  return result;
}

ThreefoldResult threefold(const OlsFit& fit_a, const OlsFit& fit_b,
                          const MeanVector& means_a, const MeanVector& means_b,
                          Reference reference) {
  check_aligned(fit_a, fit_b, means_a, means_b);
  const Eigen::Index k1 = fit_a.coefficients.size();
  const bool female = reference == Reference::female_coefficients;

  ThreefoldResult result;
  result.reference = reference;
  result.per_column.reserve(static_cast<std::size_t>(k1));
  for (Eigen::Index j = 0; j < k1; ++j) {
    const double d_mean = means_a.values(j) - means_b.values(j);
    const double d_coef = fit_a.coefficients(j) - fit_b.coefficients(j);
    ThreefoldColumn column;
    column.label = fit_a.labels[static_cast<std::size_t>(j)];
    if (female) {
      column.endowments = fit_b.coefficients(j) * d_mean;
      column.coefficients = d_coef * means_b.values(j);
      column.interaction = d_coef * d_mean;
    } else {
      column.endowments = fit_a.coefficients(j) * d_mean;
      column.coefficients = d_coef * means_a.values(j);
      column.interaction = -d_coef * d_mean;
    }
    result.per_column.push_back(column);
  }
  for (const auto& column : result.per_column) {
    result.endowments += column.endowments;
    result.coefficients += column.coefficients;
    result.interaction += column.interaction;
  }
  result.gap = fit_a.coefficients.dot(means_a.values) -
               fit_b.coefficients.dot(means_b.values);
  result.discrimination = result.coefficients + result.interaction;
  result.group_a_mean = fit_a.coefficients.dot(means_a.values);
  result.counterfactual_wage_a = result.group_a_mean - result.discrimination;
  return result;
}

ThreefoldResult ThreefoldResult::from_components(double endowments,
                                                 double coefficients,
                                                 double interaction,
                                                 double group_a_mean,
                                                 Reference reference) {
  ThreefoldResult result;
  result.reference = reference;
  result.endowments = endowments;
  result.coefficients = coefficients;
  result.interaction = interaction;
  result.gap = endowments + coefficients + interaction;
  result.discrimination = coefficients + interaction;
  result.group_a_mean = group_a_mean;
  result.counterfactual_wage_a = group_a_mean - result.discrimination;
  return result;
}

std::string DetailRow::key() const {
  switch (kind) {
    case Kind::intercept:
      return "(Intercept)";
    case Kind::term:
      return level.empty() ? variable : fmt::format("{}={}", variable, level);
    case Kind::variable_total:
      return variable;
    case Kind::overall:
      return "Overall";
  }
  return variable;
}

std::vector<DetailRow> detailed_by_variable(const ThreefoldResult& result,
                                            const ModelSpec& spec) {
  if (result.per_column.empty())
    throw ValidationError("detailed_by_variable: result carries no per-column rows");

  auto row_from = [](DetailRow::Kind kind, std::string variable,
                     std::string level, const ThreefoldColumn& column) {
    DetailRow row;
    row.kind = kind;
    row.variable = std::move(variable);
    row.level = std::move(level);
    row.endowments = column.endowments;
    row.coefficients = column.coefficients;
    row.interaction = column.interaction;
    row.nepotism = column.coefficients + column.interaction;
    return row;
  };

  std::vector<DetailRow> rows;
  std::size_t next = 0;
  auto take = [&](const ColumnLabel::Kind kind, const std::string& variable,
                  const std::string& level) -> const ThreefoldColumn& {
    if (next >= result.per_column.size())
      throw ValidationError(
          "detailed_by_variable: per-column rows do not match the model spec");
    const ThreefoldColumn& column = result.per_column[next];
    if (column.label.kind != kind || column.label.variable != variable ||
        column.label.level != level)
      throw ValidationError(fmt::format(
          "detailed_by_variable: expected column '{}', found '{}'",
          ColumnLabel{kind, variable, level}.text(), column.label.text()));
    ++next;
    return column;
  };

  rows.push_back(row_from(DetailRow::Kind::intercept, "", "",
                          take(ColumnLabel::Kind::intercept, "", "")));

  for (const auto& pred : spec.predictors) {
    switch (pred.kind) {
      case VariableKind::continuous:
        rows.push_back(row_from(DetailRow::Kind::term, pred.name, "",
                                take(ColumnLabel::Kind::continuous, pred.name, "")));
        break;
      case VariableKind::squared:
        rows.push_back(row_from(DetailRow::Kind::term, pred.name, "",
                                take(ColumnLabel::Kind::squared, pred.name, "")));
        break;
      case VariableKind::categorical: {
        DetailRow total;
        total.kind = DetailRow::Kind::variable_total;
        total.variable = pred.name;
        for (const auto& level : pred.levels) {
          if (level == pred.reference) continue;
          const auto& column = take(ColumnLabel::Kind::dummy, pred.name, level);
          rows.push_back(row_from(DetailRow::Kind::term, pred.name, level, column));
          total.endowments += column.endowments;
          total.coefficients += column.coefficients;
          total.interaction += column.interaction;
        }
        total.nepotism = total.coefficients + total.interaction;
        rows.push_back(total);
        break;
      }
    }
  }
  if (next != result.per_column.size())
    throw ValidationError(
        "detailed_by_variable: model spec does not cover all per-column rows");

  DetailRow overall;
  overall.kind = DetailRow::Kind::overall;
  overall.variable = "Overall";
  for (const auto& column : result.per_column) {
    overall.endowments += column.endowments;
    overall.coefficients += column.coefficients;
    overall.interaction += column.interaction;
  }
  overall.nepotism = overall.coefficients + overall.interaction;
  rows.push_back(overall);
  return rows;
}

bool ConsistencyReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const IdentityCheck& c) { return c.pass; });
}

std::string ConsistencyReport::summary() const {
  std::ostringstream out;
  for (const auto& check : checks) {
    out << fmt::format("{}: lhs={:.12g} rhs={:.12g} diff={:.3e} {}\n", check.name,
                       check.lhs, check.rhs, check.scaled_diff,
                       check.pass ? "ok" : "FAILED");
  }
  return out.str();
}

ConsistencyReport consistency_check(const TwofoldResult& two,
                                    const ThreefoldResult& three,
                                    double tolerance) {
  ConsistencyReport report;
  auto add = [&](std::string name, double lhs, double rhs) {
    IdentityCheck check;
    check.name = std::move(name);
    check.lhs = lhs;
    check.rhs = rhs;
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    check.scaled_diff = std::abs(lhs - rhs) / scale;
    check.pass = check.scaled_diff <= tolerance;
    report.checks.push_back(std::move(check));
  };

  add("twofold: explained + unexplained = gap", two.explained + two.unexplained,
      two.gap);
  add("threefold: endowments + coefficients + interaction = gap",
      three.endowments + three.coefficients + three.interaction, three.gap);
  add("gap agreement between twofold and threefold", two.gap, three.gap);

  const char* two_ref = to_string(two.reference);
  const char* three_ref = to_string(three.reference);
  if (two.reference == three.reference) {
    add(fmt::format("{} twofold vs {} threefold: explained = endowments",
                    two_ref, three_ref),
        two.explained, three.endowments);
    add(fmt::format(
            "{} twofold vs {} threefold: unexplained = coefficients + interaction",
            two_ref, three_ref),
        two.unexplained, three.coefficients + three.interaction);
  } else {
    add(fmt::format(
            "{} twofold vs {} threefold: explained = endowments + interaction",
            two_ref, three_ref),
        two.explained, three.endowments + three.interaction);
    add(fmt::format("{} twofold vs {} threefold: unexplained = coefficients",
                    two_ref, three_ref),
        two.unexplained, three.coefficients);
  }
  return report;
}

}  // namespace oaxaca
