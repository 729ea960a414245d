#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "oaxaca/dataset.hpp"
#include "oaxaca/design.hpp"

namespace oaxaca {

/// Per-group sampling parameters of one predictor. Continuous predictors are
/// normal; categorical predictors draw a level from the per-group
/// probabilities (aligned with the declared level order); squared predictors
/// are derived from their base and carry no parameters.
struct SyntheticPredictor {
  VariableSpec variable;
  double mean_a = 0.0, sd_a = 1.0;
  double mean_b = 0.0, sd_b = 1.0;
  std::vector<double> probs_a;
  std::vector<double> probs_b;
};

struct SyntheticGroup {
  std::string label;
  std::size_t n = 0;
  double noise_sd = 1.0;
  std::vector<double> coefficients;  // aligned with design_labels()
};

/// A fully specified two-group data generating process: the outcome is the
/// group's coefficient vector dotted with the design row plus normal noise.
struct SyntheticSpec {
  std::string outcome = "wage";
  std::string group_variable = "group";
  SyntheticGroup group_a;
  SyntheticGroup group_b;
  std::vector<SyntheticPredictor> predictors;
  std::uint64_t seed = 0;

  /// Design columns implied by the predictor roster (intercept first).
  std::vector<ColumnLabel> design_labels() const;
  /// The ModelSpec that fits data generated from this DGP.
  ModelSpec model_spec() const;
  /// Throws ConfigError on inconsistent parameters (empty groups, negative
  /// noise, probabilities not summing to one, coefficient length mismatch).
  void check() const;
};

/// Deterministic given the seed: group a rows first, then group b.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace oaxaca
