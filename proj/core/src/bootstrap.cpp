#include "oaxaca/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

#include <fmt/format.h>

#include "oaxaca/design.hpp"
#include "oaxaca/errors.hpp"
#include "oaxaca/rng.hpp"

namespace oaxaca {

const ComponentInterval* ComponentIntervals::find(std::string_view key) const {
  for (const auto& entry : entries) {
    if (entry.key == key) return &entry;
  }
  return nullptr;
}

ReplicateIndices bootstrap_indices(std::uint64_t seed, std::size_t replicate,
                                   std::size_t n_a, std::size_t n_b) {
  Rng rng(derive_seed(seed, replicate));
  ReplicateIndices indices;
  indices.group_a.reserve(n_a);
  for (std::size_t i = 0; i < n_a; ++i) indices.group_a.push_back(rng.index(n_a));
  indices.group_b.reserve(n_b);
  for (std::size_t i = 0; i < n_b; ++i) indices.group_b.push_back(rng.index(n_b));
  return indices;
}

namespace {

// Linear-interpolation empirical quantile (the common "type 7" definition);
// monotone in p, so widening the level can never narrow an interval.
double quantile_type7(const std::vector<double>& sorted, double p) {
  const std::size_t m = sorted.size();
  if (m == 1) return sorted.front();
  const double position = p * static_cast<double>(m - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  if (lower + 1 >= m) return sorted.back();
  const double fraction = position - static_cast<double>(lower);
  return sorted[lower] + fraction * (sorted[lower + 1] - sorted[lower]);
}

struct GroupDesign {
  DesignMatrix design;
  Eigen::VectorXd outcome;
};

GroupDesign resample(const GroupDesign& full, const std::vector<std::size_t>& idx) {
  GroupDesign out;
  out.design.labels = full.design.labels;
  out.design.values.resize(static_cast<Eigen::Index>(idx.size()),
                           full.design.values.cols());
  out.outcome.resize(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.design.values.row(static_cast<Eigen::Index>(i)) =
        full.design.values.row(static_cast<Eigen::Index>(idx[i]));
    out.outcome(static_cast<Eigen::Index>(i)) =
        full.outcome(static_cast<Eigen::Index>(idx[i]));
  }
  return out;
}

std::vector<double> component_values(const ThreefoldResult& three,
                                     const std::vector<DetailRow>& detail) {
  std::vector<double> values;
  values.reserve(5 + 3 * detail.size());
  values.push_back(three.gap);
  values.push_back(three.endowments);
  values.push_back(three.coefficients);
  values.push_back(three.interaction);
  values.push_back(three.discrimination);
  for (const auto& row : detail) {
    if (row.kind == DetailRow::Kind::overall) continue;
    values.push_back(row.endowments);
    values.push_back(row.coefficients);
    values.push_back(row.interaction);
  }
  return values;
}

std::vector<std::string> component_keys(const std::vector<DetailRow>& detail) {
  std::vector<std::string> keys{"gap", "endowments", "coefficients",
                                "interaction", "discrimination"};
  for (const auto& row : detail) {
    if (row.kind == DetailRow::Kind::overall) continue;
    for (const char* family : {"endowments", "coefficients", "interaction"})
      keys.push_back(fmt::format("{}:{}", family, row.key()));
  }
  return keys;
}

}  // namespace

ComponentIntervals bootstrap_decomposition(const Dataset& data,
                                           const ModelSpec& spec,
                                           Reference reference,
                                           const BootstrapConfig& config) {
  if (config.replications < 2)
    throw std::invalid_argument("bootstrap: replications must be >= 2");
  if (!(config.level > 0.0 && config.level < 1.0))
    throw std::invalid_argument("bootstrap: level must be in (0, 1)");

  auto cleaned = listwise_delete(data, spec);
  const ValidationReport report = validate(cleaned.data, spec);
  if (!report.ok()) throw ValidationError(report.summary());
  GroupSplit split = split_groups(cleaned.data, spec);

  auto built_a = build_design(split.group_a, spec);
  auto built_b = build_design(split.group_b, spec);
  const GroupDesign full_a{std::move(built_a.design), std::move(built_a.outcome)};
  const GroupDesign full_b{std::move(built_b.design), std::move(built_b.outcome)};
  const std::size_t n_a = static_cast<std::size_t>(full_a.design.n());
  const std::size_t n_b = static_cast<std::size_t>(full_b.design.n());

  // Point estimates on the full sample.
  const OlsFit fit_a = fit_ols(full_a.design, full_a.outcome);
  const OlsFit fit_b = fit_ols(full_b.design, full_b.outcome);
  const MeanVector means_a = column_means(full_a.design);
  const MeanVector means_b = column_means(full_b.design);
  const ThreefoldResult point = threefold(fit_a, fit_b, means_a, means_b, reference);
  const std::vector<DetailRow> point_detail = detailed_by_variable(point, spec);
  const std::vector<double> points = component_values(point, point_detail);
  const std::vector<std::string> keys = component_keys(point_detail);

  const std::size_t n_keys = keys.size();
  const std::size_t B = config.replications;
  std::vector<double> replicate_values(B * n_keys, 0.0);
  std::vector<char> replicate_ok(B, 0);

  auto run_replicate = [&](std::size_t r) {
    const ReplicateIndices idx = bootstrap_indices(config.seed, r, n_a, n_b);
    const GroupDesign sample_a = resample(full_a, idx.group_a);
    const GroupDesign sample_b = resample(full_b, idx.group_b);
    try {
      const OlsFit rfit_a = fit_ols(sample_a.design, sample_a.outcome);
      const OlsFit rfit_b = fit_ols(sample_b.design, sample_b.outcome);
      const ThreefoldResult three =
          threefold(rfit_a, rfit_b, column_means(sample_a.design),
                    column_means(sample_b.design), reference);
      const std::vector<double> values =
          component_values(three, detailed_by_variable(three, spec));
      std::copy(values.begin(), values.end(),
                replicate_values.begin() + static_cast<std::ptrdiff_t>(r * n_keys));
      replicate_ok[r] = 1;
    } catch (const NumericError&) {
      replicate_ok[r] = 0;  // degenerate replicate, discarded and counted
    }
  };

  unsigned n_threads = config.threads > 0
                           ? static_cast<unsigned>(config.threads)
                           : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(B));
  if (n_threads <= 1) {
    for (std::size_t r = 0; r < B; ++r) run_replicate(r);
  } else {
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> failures(n_threads);
    const std::size_t chunk = (B + n_threads - 1) / n_threads;
    for (unsigned t = 0; t < n_threads; ++t) {
      const std::size_t begin = t * chunk;
      const std::size_t end = std::min(B, begin + chunk);
      workers.emplace_back([&, t, begin, end] {
        try {
          for (std::size_t r = begin; r < end; ++r) run_replicate(r);
        } catch (...) {
          failures[t] = std::current_exception();
        }
      });
    }
    for (auto& worker : workers) worker.join();
    for (const auto& failure : failures) {
      if (failure) std::rethrow_exception(failure);
    }
  }

  ComponentIntervals intervals;
  intervals.config = config;
  intervals.discarded =
      B - static_cast<std::size_t>(
              std::count(replicate_ok.begin(), replicate_ok.end(), 1));
  intervals.used = B - intervals.discarded;
  if (intervals.discarded * 10 > B)
    throw NumericError(fmt::format(
        "bootstrap: {} of {} replicates were rank-deficient (> 10%); the "
        "design is too fragile for resampling",
        intervals.discarded, B));

  const double alpha = (1.0 - config.level) / 2.0;
  std::vector<double> column;
  column.reserve(intervals.used);
  intervals.entries.reserve(n_keys);
  for (std::size_t k = 0; k < n_keys; ++k) {
    column.clear();
    for (std::size_t r = 0; r < B; ++r) {
      if (replicate_ok[r]) column.push_back(replicate_values[r * n_keys + k]);
    }
    std::sort(column.begin(), column.end());
    ComponentInterval entry;
    entry.key = keys[k];
    entry.point = points[k];
    entry.low = quantile_type7(column, alpha);
    entry.high = quantile_type7(column, 1.0 - alpha);
    intervals.entries.push_back(std::move(entry));
  }
  return intervals;
}

}  // namespace oaxaca
