#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "oaxaca/design.hpp"
#include "oaxaca/errors.hpp"
#include "oaxaca/synthetic.hpp"
#include "test_util.hpp"

using namespace oaxaca;
using testutil::make_dataset;

namespace {

/// The full predictor roster of the shipped example model: age, age squared,
/// socioeconomic score, 4-level education, 7-level region, 11-level activity
/// and 4-level marital status.
ModelSpec full_roster_model() {
  ModelSpec spec;
  spec.outcome = "monthly_wage";
  spec.group_variable = "gender";
  spec.group_a_label = "male";
  spec.group_b_label = "female";
  spec.predictors.push_back(VariableSpec::make_continuous("age"));
  spec.predictors.push_back(VariableSpec::make_squared("age_squared", "age"));
  spec.predictors.push_back(VariableSpec::make_continuous("se_score"));
  spec.predictors.push_back(VariableSpec::make_categorical(
      "education", {"none", "primary", "secondary", "higher"}, "none"));
  spec.predictors.push_back(VariableSpec::make_categorical(
      "region",
      {"tunis_district", "north_east", "north_west", "east_center",
       "west_center", "south_east", "south_west"},
      "tunis_district"));
  spec.predictors.push_back(VariableSpec::make_categorical(
      "activity",
      {"agriculture", "mechanical_electrical", "textile_clothing_leather",
       "cottage", "trade", "transport_telecom", "tourism_catering",
       "banking_insurance", "housing", "socio_cultural",
       "health_admin_education"},
      "agriculture"));
  spec.predictors.push_back(VariableSpec::make_categorical(
      "marital_status", {"single", "married", "widowed", "divorced"}, "single"));
  return spec;
}

}  // namespace

TEST_SUITE("design") {

TEST_CASE("3-level categorical with reference plus continuous gives 4 columns") {
  ModelSpec spec;
  spec.outcome = "wage";
  spec.group_variable = "gender";
  spec.group_a_label = "male";
  spec.group_b_label = "female";
  spec.predictors.push_back(
      VariableSpec::make_categorical("edu", {"low", "mid", "high"}, "low"));
  spec.predictors.push_back(VariableSpec::make_continuous("age"));

  auto data = make_dataset({"gender", "wage", "edu", "age"},
                           {{"male", "10", "low", "30"},
                            {"male", "11", "mid", "31"},
                            {"male", "12", "high", "32"}});
  const DesignResult built = build_design(data, spec);
  REQUIRE(built.design.cols() == 4);
  CHECK(built.design.labels[0].text() == "(Intercept)");
  CHECK(built.design.labels[1].text() == "edu=mid");
  CHECK(built.design.labels[2].text() == "edu=high");
  CHECK(built.design.labels[3].text() == "age");
  // row 0 is the reference level: both dummies zero
  CHECK(built.design.values(0, 1) == 0.0);
  CHECK(built.design.values(0, 2) == 0.0);
  CHECK(built.design.values(1, 1) == 1.0);
  CHECK(built.design.values(2, 2) == 1.0);
}

TEST_CASE("squared column is the elementwise square of its base") {
  ModelSpec spec = testutil::simple_model();
  spec.predictors.push_back(VariableSpec::make_squared("x_sq", "x"));
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "10", "30"}, {"female", "9", "-4"}});
  const DesignResult built = build_design(data, spec);
  CHECK(built.design.values(0, 2) == 900.0);
  CHECK(built.design.values(1, 2) == 16.0);
  for (Eigen::Index r = 0; r < built.design.n(); ++r) {
    const double base = built.design.values(r, 1);
    CHECK(built.design.values(r, 2) == base * base);
  }
}

TEST_CASE("full predictor roster expands to 26 columns") {
  const ModelSpec spec = full_roster_model();
  auto data = make_dataset(
      {"gender", "monthly_wage", "age", "se_score", "education", "region",
       "activity", "marital_status"},
      {{"male", "350", "40", "0.3", "primary", "north_east", "trade", "married"},
       {"female", "300", "35", "-0.2", "higher", "south_west",
        "health_admin_education", "single"}});
  const DesignResult built = build_design(data, spec);
  CHECK(built.design.cols() == 26);  // intercept + 25 regressors
}

TEST_CASE("intercept column is all ones and its mean is exactly 1") {
  Rng rng(3);
  const auto made = testutil::fit_ready_dataset(rng, 40, 40, 5);
  const GroupSplit split = split_groups(made.data, made.spec.model_spec());
  const DesignResult built = build_design(split.group_a, made.spec.model_spec());
  CHECK((built.design.values.col(0).array() == 1.0).all());
  const MeanVector means = column_means(built.design);
  CHECK(means.values(0) == 1.0);
}

TEST_CASE("dummy row sums are 0 or 1 per categorical variable") {
  Rng rng(11);
  const auto made = testutil::fit_ready_dataset(rng, 60, 60, 8);
  const ModelSpec spec = made.spec.model_spec();
  const DesignResult built = build_design(made.data, spec);
  for (const auto& pred : spec.predictors) {
    if (pred.kind != VariableKind::categorical) continue;
    std::vector<Eigen::Index> cols;
    for (std::size_t j = 0; j < built.design.labels.size(); ++j)
      if (built.design.labels[j].variable == pred.name)
        cols.push_back(static_cast<Eigen::Index>(j));
    REQUIRE_FALSE(cols.empty());
    for (Eigen::Index r = 0; r < built.design.n(); ++r) {
      double sum = 0.0;
      for (Eigen::Index c : cols) sum += built.design.values(r, c);
      CHECK((sum == 0.0 || sum == 1.0));
    }
  }
}

TEST_CASE("encoding round-trip recovers the categorical column") {
  ModelSpec spec;
  spec.outcome = "wage";
  spec.group_variable = "gender";
  spec.group_a_label = "male";
  spec.group_b_label = "female";
  spec.predictors.push_back(VariableSpec::make_categorical(
      "region", {"north", "south", "east", "west"}, "south"));
  Rng rng(17);
  Dataset data;
  data.columns = {"gender", "wage", "region"};
  const std::vector<std::string> levels{"north", "south", "east", "west"};
  for (std::size_t i = 0; i < 200; ++i) {
    data.rows.push_back({std::optional<std::string>(i % 2 == 0 ? "male" : "female"),
                         std::optional<std::string>("1"),
                         std::optional<std::string>(levels[rng.index(4)])});
  }
  const DesignResult built = build_design(data, spec);
  for (std::size_t r = 0; r < data.n_rows(); ++r) {
    std::string decoded = "south";  // reference when no dummy fires
    for (std::size_t j = 0; j < built.design.labels.size(); ++j) {
      const auto& label = built.design.labels[j];
      if (label.kind != ColumnLabel::Kind::dummy) continue;
      if (built.design.values(static_cast<Eigen::Index>(r),
                              static_cast<Eigen::Index>(j)) == 1.0)
        decoded = label.level;
    }
    CHECK(decoded == *data.cell(r, 2));
  }
}

TEST_CASE("column means match a brute-force summation oracle") {
  Rng rng(23);
  const auto made = testutil::fit_ready_dataset(rng, 120, 80, 7);
  const DesignResult built = build_design(made.data, made.spec.model_spec());
  const MeanVector means = column_means(built.design);
  for (Eigen::Index c = 0; c < built.design.cols(); ++c) {
    long double sum = 0.0L;
    for (Eigen::Index r = 0; r < built.design.n(); ++r)
      sum += built.design.values(r, c);
    const double expected =
        static_cast<double>(sum / static_cast<long double>(built.design.n()));
    CHECK(means.values(c) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("dummy mean equals the sample proportion of its level") {
  ModelSpec spec;
  spec.outcome = "wage";
  spec.group_variable = "gender";
  spec.group_a_label = "male";
  spec.group_b_label = "female";
  spec.predictors.push_back(
      VariableSpec::make_categorical("flag", {"off", "on"}, "off"));
  Dataset data;
  data.columns = {"gender", "wage", "flag"};
  for (std::size_t i = 0; i < 10; ++i) {
    data.rows.push_back({std::optional<std::string>("male"),
                         std::optional<std::string>("1"),
                         std::optional<std::string>(i < 3 ? "on" : "off")});
  }
  const DesignResult built = build_design(data, spec);
  const MeanVector means = column_means(built.design);
  CHECK(means.values(1) == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("build_design is bit-deterministic") {
  Rng rng(29);
  const auto made = testutil::fit_ready_dataset(rng, 50, 50, 6);
  const DesignResult first = build_design(made.data, made.spec.model_spec());
  const DesignResult second = build_design(made.data, made.spec.model_spec());
  REQUIRE(first.design.values.size() == second.design.values.size());
  CHECK(std::memcmp(first.design.values.data(), second.design.values.data(),
                    sizeof(double) *
                        static_cast<std::size_t>(first.design.values.size())) == 0);
  CHECK(std::memcmp(first.outcome.data(), second.outcome.data(),
                    sizeof(double) *
                        static_cast<std::size_t>(first.outcome.size())) == 0);
}

TEST_CASE("log transform applies to the outcome and errors name the row") {
  ModelSpec spec = testutil::simple_model();
  spec.transform = OutcomeTransform::log;
  auto good = make_dataset({"gender", "wage", "x"},
                           {{"male", "10", "1"}, {"female", "20", "2"}});
  const DesignResult built = build_design(good, spec);
  CHECK(built.outcome(0) == doctest::Approx(std::log(10.0)));
  CHECK(built.outcome(1) == doctest::Approx(std::log(20.0)));

  auto bad = make_dataset({"gender", "wage", "x"},
                          {{"male", "10", "1"}, {"female", "-2", "2"}});
  CHECK_THROWS_WITH_AS(build_design(bad, spec), doctest::Contains("row 1"),
                       ValidationError);
}

TEST_CASE("column_means rejects an empty design") {
  DesignMatrix empty;
  empty.values.resize(0, 3);
  empty.labels = {{ColumnLabel::Kind::intercept, "", ""},
                  {ColumnLabel::Kind::continuous, "a", ""},
                  {ColumnLabel::Kind::continuous, "b", ""}};
  CHECK_THROWS_AS(column_means(empty), NumericError);
}

}  // TEST_SUITE
