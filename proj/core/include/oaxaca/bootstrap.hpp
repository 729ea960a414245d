#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "oaxaca/dataset.hpp"
#include "oaxaca/decomposition.hpp"

namespace oaxaca {

/// Resampling is always independent with-replacement within each group
/// (group sizes are fixed by the survey design).
struct BootstrapConfig {
  std::size_t replications = 200;  // >= 2
  double level = 0.95;             // in (0, 1)
  std::uint64_t seed = 0;
  int threads = 0;  // 0 = hardware concurrency; results never depend on it
};

struct ComponentInterval {
  std::string key;
  double point = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// Percentile intervals keyed by "gap", "endowments", "coefficients",
/// "interaction", "discrimination" and then "<component>:<detail row>" for
/// every per-variable detail row, in report order.
struct ComponentIntervals {
  std::vector<ComponentInterval> entries;
  BootstrapConfig config;
  std::size_t discarded = 0;  // rank-deficient replicates
  std::size_t used = 0;

  const ComponentInterval* find(std::string_view key) const;
};

/// The with-replacement row indices for one replicate, derived from the
/// master seed and the replicate number only. Exposed so the resampling
/// streams can be replayed independently.
struct ReplicateIndices {
  std::vector<std::size_t> group_a;
  std::vector<std::size_t> group_b;
};
ReplicateIndices bootstrap_indices(std::uint64_t seed, std::size_t replicate,
                                   std::size_t n_a, std::size_t n_b);

/// Resamples rows within each group, refits both wage equations, recomputes
/// the threefold decomposition per replicate, and returns percentile
/// intervals. Deterministic given (seed, replications, level) regardless of
/// thread count. Rank-deficient replicates are discarded and counted; more
/// than 10% discarded is an error.
ComponentIntervals bootstrap_decomposition(const Dataset& data,
                                           const ModelSpec& spec,
                                           Reference reference,
                                           const BootstrapConfig& config);

}  // namespace oaxaca
