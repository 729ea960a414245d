#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "oaxaca/errors.hpp"
#include "oaxaca/mca.hpp"
#include "oaxaca/rng.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace oaxaca;
using testutil::make_dataset;

namespace {

Dataset hand_instance() {
  return make_dataset({"X", "Y"}, {{"x1", "y1"},
                                   {"x1", "y1"},
                                   {"x1", "y2"},
                                   {"x2", "y2"},
                                   {"x2", "y3"},
                                   {"x2", "y3"}});
}

std::vector<VariableSpec> hand_variables() {
  return {VariableSpec::make_categorical("X", {"x1", "x2"}, "x1"),
          VariableSpec::make_categorical("Y", {"y1", "y2", "y3"}, "y1")};
}

McaOptions anchored(std::string variable, std::string level) {
  McaOptions options;
  options.positive_anchor = McaCategory{std::move(variable), std::move(level)};
  return options;
}

/// Brute-force MCA of the hand instance: indicator matrix, standardized
/// residuals, Jacobi eigendecomposition of S'S.
struct HandOracle {
  std::vector<double> singular_values;
  std::vector<double> coordinates;  // standard, dimension 1, anchored at X=x1
  std::vector<double> scores;       // row principal coordinates
};

HandOracle hand_oracle() {
  const int z[6][5] = {{1, 0, 1, 0, 0}, {1, 0, 1, 0, 0}, {1, 0, 0, 1, 0},
                       {0, 1, 0, 1, 0}, {0, 1, 0, 0, 1}, {0, 1, 0, 0, 1}};
  const double n = 6.0, q = 2.0, grand = n * q;
  double counts[5] = {0, 0, 0, 0, 0};
  for (const auto& row : z)
    for (int j = 0; j < 5; ++j) counts[j] += row[j];

  double s[6][5];
  for (int i = 0; i < 6; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double p = z[i][j] / grand;
      const double expected = (1.0 / n) * (counts[j] / grand);
      s[i][j] = (p - expected) / std::sqrt(expected);
    }
  }
  std::vector<std::vector<double>> gram(5, std::vector<double>(5, 0.0));
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j)
      for (int r = 0; r < 6; ++r) gram[i][j] += s[r][i] * s[r][j];

  const oracles::EigenDecomposition eigen = oracles::jacobi_eigen(gram);
  HandOracle oracle;
  for (double value : eigen.values)
    if (value > 1e-12) oracle.singular_values.push_back(std::sqrt(value));

  oracle.coordinates.resize(5);
  for (int j = 0; j < 5; ++j)
    oracle.coordinates[j] = eigen.vectors[0][j] / std::sqrt(counts[j] / grand);
  if (oracle.coordinates[0] < 0.0)
    for (auto& c : oracle.coordinates) c = -c;

  oracle.scores.resize(6);
  for (int i = 0; i < 6; ++i) {
    double sum = 0.0;
    for (int j = 0; j < 5; ++j)
      if (z[i][j] == 1) sum += oracle.coordinates[j];
    oracle.scores[i] = sum / q;
  }
  return oracle;
}

}  // namespace

TEST_SUITE("mca_score") {

TEST_CASE("hand instance matches the Jacobi eigendecomposition oracle") {
  const McaModel model =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  const HandOracle oracle = hand_oracle();

  REQUIRE(model.singular_values.size() == oracle.singular_values.size());
  for (std::size_t d = 0; d < oracle.singular_values.size(); ++d)
    CHECK(model.singular_values[d] ==
          doctest::Approx(oracle.singular_values[d]).epsilon(1e-9));

  REQUIRE(model.categories.size() == 5);
  for (std::size_t j = 0; j < 5; ++j)
    CHECK(model.coordinates(static_cast<Eigen::Index>(j)) ==
          doctest::Approx(oracle.coordinates[j]).epsilon(1e-9));

  const Eigen::VectorXd scores = score_individuals(model, hand_instance());
  for (int i = 0; i < 6; ++i)
    CHECK(scores(i) == doctest::Approx(oracle.scores[i]).epsilon(1e-9));
}

TEST_CASE("hand instance satisfies the centering and inertia identities") {
  const McaModel model =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  const Eigen::VectorXd scores = score_individuals(model, hand_instance());
  CHECK(std::abs(scores.mean()) <= 1e-9);
  const double variance = scores.squaredNorm() / static_cast<double>(scores.size());
  CHECK(variance == doctest::Approx(model.first_inertia()).epsilon(1e-9));
  // indicator MCA: total inertia = (J - Q) / Q
  CHECK(model.total_inertia == doctest::Approx((5.0 - 2.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("two perfectly correlated binaries give two symmetric score values") {
  auto data = make_dataset({"A", "B"}, {{"a1", "b1"},
                                        {"a1", "b1"},
                                        {"a1", "b1"},
                                        {"a1", "b1"},
                                        {"a2", "b2"},
                                        {"a2", "b2"},
                                        {"a2", "b2"},
                                        {"a2", "b2"}});
  const std::vector<VariableSpec> variables{
      VariableSpec::make_categorical("A", {"a1", "a2"}, "a1"),
      VariableSpec::make_categorical("B", {"b1", "b2"}, "b1")};
  const McaModel model = fit_mca(data, variables, anchored("A", "a2"));
  const Eigen::VectorXd scores = score_individuals(model, data);
  std::set<double> distinct(scores.data(), scores.data() + scores.size());
  REQUIRE(distinct.size() == 2);
  const double low = *distinct.begin();
  const double high = *distinct.rbegin();
  CHECK(low == doctest::Approx(-high).epsilon(1e-12));
  CHECK(high > 0.0);
}

TEST_CASE("uninformative categories still satisfy the invariants") {
  Rng rng(31);
  Dataset data;
  data.columns = {"u", "v", "w"};
  for (std::size_t i = 0; i < 2000; ++i) {
    data.rows.push_back(
        {std::optional<std::string>("l" + std::to_string(rng.index(3))),
         std::optional<std::string>("l" + std::to_string(rng.index(3))),
         std::optional<std::string>("l" + std::to_string(rng.index(3)))});
  }
  std::vector<VariableSpec> variables;
  for (const char* name : {"u", "v", "w"}) {
    VariableSpec var;
    var.name = name;
    var.kind = VariableKind::categorical;  // levels discovered from the data
    variables.push_back(var);
  }
  const McaModel model = fit_mca(data, variables);
  const Eigen::VectorXd scores = score_individuals(model, data);
  CHECK(std::abs(scores.mean()) <= 1e-9);
  const double variance = scores.squaredNorm() / static_cast<double>(scores.size());
  CHECK(variance == doctest::Approx(model.first_inertia()).epsilon(1e-9));
  for (std::size_t d = 1; d < model.singular_values.size(); ++d)
    CHECK(model.singular_values[d] <= model.singular_values[d - 1]);
  CHECK(model.singular_values.front() >= 0.0);
}

TEST_CASE("scores are invariant to variable and level declaration order") {
  const McaModel base =
      fit_mca(hand_instance(), hand_variables(), anchored("Y", "y3"));
  const Eigen::VectorXd base_scores = score_individuals(base, hand_instance());

  // Variables swapped and levels declared in a different order.
  const std::vector<VariableSpec> shuffled{
      VariableSpec::make_categorical("Y", {"y3", "y1", "y2"}, "y3"),
      VariableSpec::make_categorical("X", {"x2", "x1"}, "x2")};
  const McaModel permuted =
      fit_mca(hand_instance(), shuffled, anchored("Y", "y3"));
  const Eigen::VectorXd permuted_scores =
      score_individuals(permuted, hand_instance());
  for (int i = 0; i < 6; ++i)
    CHECK(permuted_scores(i) == doctest::Approx(base_scores(i)).epsilon(1e-12));
}

TEST_CASE("anchor orientation flips the axis coherently") {
  const McaModel plus =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  const McaModel minus =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x2"));
  CHECK(*plus.coordinate("X", "x1") > 0.0);
  CHECK(*minus.coordinate("X", "x2") > 0.0);
  for (std::size_t j = 0; j < plus.categories.size(); ++j)
    CHECK(plus.coordinates(static_cast<Eigen::Index>(j)) ==
          doctest::Approx(-minus.coordinates(static_cast<Eigen::Index>(j)))
              .epsilon(1e-12));
}

TEST_CASE("identical category patterns score identically") {
  const McaModel model =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  const Eigen::VectorXd scores = score_individuals(model, hand_instance());
  CHECK(scores(0) == scores(1));  // same (x1, y1) pattern
  CHECK(scores(4) == scores(5));  // same (x2, y3) pattern
}

TEST_CASE("a single observed level is an error naming the variable") {
  auto data = make_dataset({"A", "B"},
                           {{"a1", "b1"}, {"a1", "b2"}, {"a1", "b1"}});
  std::vector<VariableSpec> variables;
  for (const char* name : {"A", "B"}) {
    VariableSpec var;
    var.name = name;
    var.kind = VariableKind::categorical;
    variables.push_back(var);
  }
  CHECK_THROWS_WITH_AS(fit_mca(data, variables), doctest::Contains("'A'"),
                       ValidationError);
}

TEST_CASE("scoring an unseen level names the row and level") {
  const McaModel model =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  auto data = make_dataset({"X", "Y"}, {{"x1", "y1"}, {"x2", "y9"}});
  CHECK_THROWS_WITH_AS(score_individuals(model, data), doctest::Contains("y9"),
                       ValidationError);
  CHECK_THROWS_WITH_AS(score_individuals(model, data), doctest::Contains("row 1"),
                       ValidationError);
}

TEST_CASE("missing cells are rejected by fit and score") {
  auto data = hand_instance();
  data.rows[2][1] = std::nullopt;
  CHECK_THROWS_AS(fit_mca(data, hand_variables()), ValidationError);
  const McaModel model =
      fit_mca(hand_instance(), hand_variables(), anchored("X", "x1"));
  CHECK_THROWS_AS(score_individuals(model, data), ValidationError);
}

TEST_CASE("fewer than two variables is an error") {
  auto data = make_dataset({"X"}, {{"x1"}, {"x2"}});
  std::vector<VariableSpec> variables{
      VariableSpec::make_categorical("X", {"x1", "x2"}, "x1")};
  CHECK_THROWS_AS(fit_mca(data, variables), ValidationError);
}

}  // TEST_SUITE
