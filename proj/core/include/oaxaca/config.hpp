#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "oaxaca/csv.hpp"
#include "oaxaca/dataset.hpp"
#include "oaxaca/mca.hpp"
#include "oaxaca/synthetic.hpp"

namespace oaxaca {

/// Model configuration: the ModelSpec plus the CSV dialect it expects.
struct LoadedModel {
  ModelSpec spec;
  CsvOptions csv;
};

LoadedModel model_from_json_text(std::string_view text);
LoadedModel load_model(const std::filesystem::path& path);

SyntheticSpec synthetic_spec_from_json_text(std::string_view text);
SyntheticSpec load_synthetic_spec(const std::filesystem::path& path);

/// Configuration of the `score` command: which categorical asset variables
/// feed the MCA, the optional positive anchor, and the output column name.
struct McaConfig {
  std::vector<VariableSpec> variables;
  McaOptions options;
  std::string score_column = "score";
  CsvOptions csv;
};

McaConfig mca_config_from_json_text(std::string_view text);
McaConfig load_mca_config(const std::filesystem::path& path);

}  // namespace oaxaca
