#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "oaxaca/csv.hpp"
#include "oaxaca/dataset.hpp"
#include "oaxaca/errors.hpp"
#include "oaxaca/rng.hpp"
#include "test_util.hpp"

using namespace oaxaca;
using testutil::make_dataset;

namespace {

ModelSpec region_model() {
  ModelSpec spec = testutil::simple_model();
  spec.predictors.push_back(VariableSpec::make_categorical(
      "region", {"north", "south", "east"}, "north"));
  return spec;
}

}  // namespace

TEST_SUITE("data_model") {

TEST_CASE("clean dataset validates with per-group counts") {
  // Desk-scale mirror of the published sample sizes.
  Dataset data;
  data.columns = {"gender", "wage", "x"};
  const std::size_t males = 19372, females = 10482;
  data.rows.reserve(males + females);
  Rng rng(7);
  for (std::size_t i = 0; i < males + females; ++i) {
    const bool male = i < males;
    data.rows.push_back({std::optional<std::string>(male ? "male" : "female"),
                         std::optional<std::string>(std::to_string(100 + i % 50)),
                         std::optional<std::string>(std::to_string(rng.index(10)))});
  }
  const ValidationReport report = validate(data, testutil::simple_model());
  CHECK(report.ok());
  CHECK(report.group_a_rows == males);
  CHECK(report.group_b_rows == females);
}

TEST_CASE("empty dataset flags both groups as empty") {
  Dataset data;
  data.columns = {"gender", "wage", "x"};
  const ValidationReport report = validate(data, testutil::simple_model());
  CHECK_FALSE(report.ok());
  std::size_t empty_group_issues = 0;
  for (const auto& issue : report.issues)
    if (issue.kind == ValidationIssue::Kind::empty_group) ++empty_group_issues;
  CHECK(empty_group_issues == 2);
  CHECK(report.group_a_rows == 0);
  CHECK(report.group_b_rows == 0);
}

TEST_CASE("unknown level names row, column and level") {
  auto data = make_dataset({"gender", "wage", "x", "region"},
                           {{"male", "10", "1", "north"},
                            {"female", "11", "2", "Mars"},
                            {"female", "12", "3", "south"},
                            {"male", "12", "3", "south"},
                            {"male", "12", "3", "east"},
                            {"female", "12", "3", "east"}});
  const ValidationReport report = validate(data, region_model());
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.kind != ValidationIssue::Kind::unknown_level) continue;
    found = true;
    CHECK(issue.row == std::size_t{1});
    CHECK(issue.column == "region");
    CHECK(issue.detail == "Mars");
  }
  CHECK(found);
}

TEST_CASE("missing cells, bad numerics and unknown groups are reported") {
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "10", ""},
                            {"female", "abc", "2"},
                            {"other", "12", "3"},
                            {"male", "12", "3"},
                            {"female", "12", "3"}});
  const ValidationReport report = validate(data, testutil::simple_model());
  std::multiset<ValidationIssue::Kind> kinds;
  for (const auto& issue : report.issues) kinds.insert(issue.kind);
  CHECK(kinds.count(ValidationIssue::Kind::missing_value) == 1);
  CHECK(kinds.count(ValidationIssue::Kind::bad_numeric) == 1);
  CHECK(kinds.count(ValidationIssue::Kind::unknown_group_label) == 1);
}

TEST_CASE("log transform flags non-positive outcomes") {
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "10", "1"},
                            {"female", "0", "2"},
                            {"female", "-3", "2"},
                            {"female", "5", "2"}});
  ModelSpec spec = testutil::simple_model();
  spec.transform = OutcomeTransform::log;
  const ValidationReport report = validate(data, spec);
  std::size_t flagged = 0;
  for (const auto& issue : report.issues)
    if (issue.kind == ValidationIssue::Kind::nonpositive_outcome) ++flagged;
  CHECK(flagged == 2);
}

TEST_CASE("level unobserved in one group is flagged") {
  auto data = make_dataset({"gender", "wage", "x", "region"},
                           {{"male", "10", "1", "north"},
                            {"male", "11", "2", "south"},
                            {"male", "11", "2", "east"},
                            {"female", "12", "3", "north"},
                            {"female", "12", "3", "south"}});
  const ValidationReport report = validate(data, region_model());
  REQUIRE_FALSE(report.ok());
  bool found = false;
  for (const auto& issue : report.issues) {
    if (issue.kind != ValidationIssue::Kind::unobserved_level) continue;
    found = true;
    CHECK(issue.column == "region");
    CHECK(issue.detail.find("east") != std::string::npos);
    CHECK(issue.detail.find("female") != std::string::npos);
  }
  CHECK(found);
}

TEST_CASE("validate is idempotent") {
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "10", ""}, {"female", "11", "2"}});
  const ValidationReport first = validate(data, testutil::simple_model());
  const ValidationReport second = validate(data, testutil::simple_model());
  REQUIRE(first.issues.size() == second.issues.size());
  for (std::size_t i = 0; i < first.issues.size(); ++i)
    CHECK(first.issues[i].to_string() == second.issues[i].to_string());
}

TEST_CASE("listwise deletion drops rows missing model columns only") {
  auto data = make_dataset({"gender", "wage", "x", "unused"},
                           {{"male", "10", "1", ""},
                            {"female", "", "2", "z"},
                            {"male", "12", "", "z"},
                            {"", "13", "3", "z"},
                            {"female", "14", "4", ""}});
  const ListwiseResult result = listwise_delete(data, testutil::simple_model());
  CHECK(result.dropped_rows == 3);
  REQUIRE(result.data.n_rows() == 2);
  // gaps in non-model columns survive
  CHECK_FALSE(result.data.cell(0, 3).has_value());
}

TEST_CASE("split partitions rows by group") {
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "1", "1"},
                            {"male", "2", "1"},
                            {"female", "3", "1"},
                            {"male", "4", "1"},
                            {"female", "5", "1"},
                            {"male", "6", "1"},
                            {"female", "7", "1"},
                            {"male", "8", "1"}});
  const GroupSplit split = split_groups(data, testutil::simple_model());
  CHECK(split.group_a.n_rows() == 5);
  CHECK(split.group_b.n_rows() == 3);
  CHECK(split.dropped_rows == 0);
}

TEST_CASE("split errors on an empty group") {
  auto data = make_dataset({"gender", "wage", "x"},
                           {{"male", "1", "1"}, {"male", "2", "2"}});
  CHECK_THROWS_WITH_AS(split_groups(data, testutil::simple_model()),
                       doctest::Contains("empty group"), ValidationError);
}

TEST_CASE("split of a 1000-row 40 percent dataset gives (600, 400)") {
  Dataset data;
  data.columns = {"gender", "wage", "x"};
  for (std::size_t i = 0; i < 1000; ++i) {
    data.rows.push_back({std::optional<std::string>(i < 600 ? "male" : "female"),
                         std::optional<std::string>("1"),
                         std::optional<std::string>("2")});
  }
  const GroupSplit split = split_groups(data, testutil::simple_model());
  // independent oracle: direct row count
  std::size_t males = 0;
  for (const auto& row : data.rows)
    if (row[0] == "male") ++males;
  CHECK(males == 600);
  CHECK(split.group_a.n_rows() == 600);
  CHECK(split.group_b.n_rows() == 400);
}

TEST_CASE("split is a partition: counts add up and no row duplicates") {
  Rng rng(99);
  Dataset data;
  data.columns = {"gender", "wage", "x", "id"};
  for (std::size_t i = 0; i < 500; ++i) {
    const double u = rng.uniform();
    std::optional<std::string> group;
    if (u < 0.45) {
      group = "male";
    } else if (u < 0.9) {
      group = "female";
    } else if (u < 0.95) {
      group = "unknown";
    }  // else missing
    data.rows.push_back({group, std::optional<std::string>("1"),
                         std::optional<std::string>("2"),
                         std::optional<std::string>(std::to_string(i))});
  }
  const GroupSplit split = split_groups(data, testutil::simple_model());
  CHECK(split.group_a.n_rows() + split.group_b.n_rows() + split.dropped_rows ==
        data.n_rows());
  std::set<std::string> ids;
  for (const auto* part : {&split.group_a, &split.group_b}) {
    for (const auto& row : part->rows) {
      CHECK(ids.insert(*row[3]).second);  // no duplicates across parts
    }
  }
}

}  // TEST_SUITE

TEST_SUITE("csv") {

TEST_CASE("quoted fields, embedded delimiters and CRLF") {
  const std::string text =
      "name,note,value\r\n"
      "alice,\"hi, there\",1\r\n"
      "bob,\"line\nbreak\",2\n"
      "carl,\"quote \"\" inside\",3";
  const Dataset data = read_csv_text(text);
  REQUIRE(data.n_rows() == 3);
  CHECK(*data.cell(0, 1) == "hi, there");
  CHECK(*data.cell(1, 1) == "line\nbreak");
  CHECK(*data.cell(2, 1) == "quote \" inside");
}

TEST_CASE("missing sentinels map to missing cells") {
  CsvOptions options;
  options.missing_sentinels = {"", "NA"};
  const Dataset data = read_csv_text("a,b\n1,NA\n,2\n", options);
  CHECK_FALSE(data.cell(0, 1).has_value());
  CHECK_FALSE(data.cell(1, 0).has_value());
  CHECK(*data.cell(1, 1) == "2");
}

TEST_CASE("ragged rows are an error naming the line") {
  CHECK_THROWS_WITH_AS(read_csv_text("a,b\n1,2\n3\n"), doctest::Contains("line 3"),
                       IoError);
}

TEST_CASE("unterminated quote is an error") {
  CHECK_THROWS_AS(read_csv_text("a,b\n\"oops,2\n"), IoError);
}

TEST_CASE("round trip preserves cells and missingness") {
  Rng rng(42);
  for (int iteration = 0; iteration < 20; ++iteration) {
    Dataset data;
    data.columns = {"plain", "tricky,name", "c"};
    const std::size_t n = 1 + rng.index(8);
    for (std::size_t r = 0; r < n; ++r) {
      auto cell = [&]() -> std::optional<std::string> {
        switch (rng.index(5)) {
          case 0:
            return std::nullopt;
          case 1:
            return "with,comma";
          case 2:
            return "with \"quote\"";
          case 3:
            return "line\nbreak";
          default:
            return std::to_string(rng.index(1000));
        }
      };
      data.rows.push_back({cell(), cell(), cell()});
    }
    const Dataset reread = read_csv_text(write_csv_text(data));
    REQUIRE(reread.columns == data.columns);
    REQUIRE(reread.n_rows() == data.n_rows());
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < 3; ++c) CHECK(reread.cell(r, c) == data.cell(r, c));
  }
}

}  // TEST_SUITE
