#include "oaxaca/synthetic.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "oaxaca/errors.hpp"
#include "oaxaca/rng.hpp"

namespace oaxaca {

namespace {

std::string format_double(double value) {
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) throw NumericError("synthetic: number formatting failed");
  return std::string(buffer, ptr);
}

}  // namespace

std::vector<ColumnLabel> SyntheticSpec::design_labels() const {
  std::vector<ColumnLabel> labels;
  labels.push_back({ColumnLabel::Kind::intercept, "", ""});
  for (const auto& pred : predictors) {
    switch (pred.variable.kind) {
      case VariableKind::continuous:
        labels.push_back({ColumnLabel::Kind::continuous, pred.variable.name, ""});
        break;
      case VariableKind::squared:
        labels.push_back({ColumnLabel::Kind::squared, pred.variable.name, ""});
        break;
      case VariableKind::categorical:
        for (const auto& level : pred.variable.levels) {
          if (level == pred.variable.reference) continue;
          labels.push_back({ColumnLabel::Kind::dummy, pred.variable.name, level});
        }
        break;
    }
  }
  return labels;
}

ModelSpec SyntheticSpec::model_spec() const {
  ModelSpec spec;
  spec.outcome = outcome;
  spec.transform = OutcomeTransform::identity;
  spec.group_variable = group_variable;
  spec.group_a_label = group_a.label;
  spec.group_b_label = group_b.label;
  for (const auto& pred : predictors) spec.predictors.push_back(pred.variable);
  return spec;
}

void SyntheticSpec::check() const {
  if (group_a.n == 0)
    throw ConfigError(fmt::format("synthetic: empty group a ('{}')", group_a.label));
  if (group_b.n == 0)
    throw ConfigError(fmt::format("synthetic: empty group b ('{}')", group_b.label));
  for (const auto* group : {&group_a, &group_b}) {
    if (group->noise_sd < 0.0)
      throw ConfigError(
          fmt::format("synthetic: negative noise sd for '{}'", group->label));
  }
  model_spec().check();

  const std::size_t k1 = design_labels().size();
  for (const auto* group : {&group_a, &group_b}) {
    if (group->coefficients.size() != k1)
      throw ConfigError(fmt::format(
          "synthetic: group '{}' has {} coefficients, design has {} columns",
          group->label, group->coefficients.size(), k1));
  }

  for (const auto& pred : predictors) {
    if (pred.variable.kind == VariableKind::categorical) {
      for (const auto* probs : {&pred.probs_a, &pred.probs_b}) {
        if (probs->size() != pred.variable.levels.size())
          throw ConfigError(fmt::format(
              "synthetic: '{}' has {} levels but {} probabilities",
              pred.variable.name, pred.variable.levels.size(), probs->size()));
        double total = 0.0;
        for (double p : *probs) {
          if (p < 0.0)
            throw ConfigError(fmt::format(
                "synthetic: negative level probability for '{}'", pred.variable.name));
          total += p;
        }
        if (std::abs(total - 1.0) > 1e-9)
          throw ConfigError(fmt::format(
              "synthetic: probabilities of '{}' sum to {}, expected 1",
              pred.variable.name, total));
      }
    } else if (pred.variable.kind == VariableKind::continuous) {
      if (pred.sd_a < 0.0 || pred.sd_b < 0.0)
        throw ConfigError(
            fmt::format("synthetic: negative sd for '{}'", pred.variable.name));
    }
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.check();
  const std::vector<ColumnLabel> labels = spec.design_labels();
  const std::size_t k1 = labels.size();

  Dataset data;
  data.columns.push_back(spec.group_variable);
  std::vector<std::size_t> base_of_predictor;  // data column per predictor
  for (const auto& pred : spec.predictors) {
    if (pred.variable.kind == VariableKind::squared) {
      base_of_predictor.push_back(0);  // unused, derived from its base
      continue;
    }
    base_of_predictor.push_back(data.columns.size());
    data.columns.push_back(pred.variable.name);
  }
  const std::size_t outcome_col = data.columns.size();
  data.columns.push_back(spec.outcome);

  Rng rng(spec.seed);
  std::vector<double> design_row(k1, 0.0);

  auto emit_group = [&](const SyntheticGroup& group, bool is_a) {
    for (std::size_t i = 0; i < group.n; ++i) {
      std::vector<std::optional<std::string>> row(data.columns.size());
      row[0] = group.label;

      std::fill(design_row.begin(), design_row.end(), 0.0);
      design_row[0] = 1.0;
      std::size_t col = 1;
      // First pass draws every source value; squared columns are filled from
      // the already-drawn base (bases are declared before their squares in
      // practice, but a second pass keeps declaration order irrelevant).
      std::vector<double> continuous_value(spec.predictors.size(), 0.0);
      std::vector<std::size_t> column_of_predictor(spec.predictors.size(), 0);
      for (std::size_t p = 0; p < spec.predictors.size(); ++p) {
        const auto& pred = spec.predictors[p];
        column_of_predictor[p] = col;
        switch (pred.variable.kind) {
          case VariableKind::continuous: {
            const double mean = is_a ? pred.mean_a : pred.mean_b;
            const double sd = is_a ? pred.sd_a : pred.sd_b;
            const double value = rng.normal(mean, sd);
            continuous_value[p] = value;
            design_row[col] = value;
            row[base_of_predictor[p]] = format_double(value);
            ++col;
            break;
          }
          case VariableKind::squared:
            ++col;  // filled in the second pass
            break;
          case VariableKind::categorical: {
            const auto& probs = is_a ? pred.probs_a : pred.probs_b;
            const double u = rng.uniform();
            double cumulative = 0.0;
            std::size_t chosen = pred.variable.levels.size() - 1;
            for (std::size_t l = 0; l < probs.size(); ++l) {
              cumulative += probs[l];
              if (u < cumulative) {
                chosen = l;
                break;
              }
            }
            const std::string& level = pred.variable.levels[chosen];
            row[base_of_predictor[p]] = level;
            for (const auto& dummy_level : pred.variable.levels) {
              if (dummy_level == pred.variable.reference) continue;
              if (dummy_level == level) design_row[col] = 1.0;
              ++col;
            }
            break;
          }
        }
      }
      for (std::size_t p = 0; p < spec.predictors.size(); ++p) {
        const auto& pred = spec.predictors[p];
        if (pred.variable.kind != VariableKind::squared) continue;
        for (std::size_t q = 0; q < spec.predictors.size(); ++q) {
          if (spec.predictors[q].variable.name == pred.variable.base) {
            const double base = continuous_value[q];
            design_row[column_of_predictor[p]] = base * base;
            break;
          }
        }
      }

      double y = 0.0;
      for (std::size_t j = 0; j < k1; ++j)
        y += group.coefficients[j] * design_row[j];
      y += rng.normal(0.0, group.noise_sd);
      row[outcome_col] = format_double(y);

      data.rows.push_back(std::move(row));
    }
  };

  emit_group(spec.group_a, true);
  emit_group(spec.group_b, false);
  return data;
}

}  // namespace oaxaca
