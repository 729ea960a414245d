#include "oaxaca/config.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>
#include <json.hpp>

#include "oaxaca/errors.hpp"

namespace oaxaca {

namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
  json parsed = json::parse(text, nullptr, false);
  if (parsed.is_discarded())
    throw ConfigError(fmt::format("{}: not valid JSON", what));
  return parsed;
}

std::string slurp(const std::filesystem::path& path, const char* what) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError(fmt::format("{}: cannot open '{}'", what, path.string()));
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw IoError(fmt::format("{}: read failure on '{}'", what, path.string()));
  return buffer.str();
}

std::string require_string(const json& node, const char* key, const char* where) {
  if (!node.contains(key) || !node[key].is_string())
    throw ConfigError(fmt::format("{}: missing string field '{}'", where, key));
  return node[key].get<std::string>();
}

double require_number(const json& node, const char* key, const char* where) {
  if (!node.contains(key) || !node[key].is_number())
    throw ConfigError(fmt::format("{}: missing numeric field '{}'", where, key));
  return node[key].get<double>();
}

CsvOptions csv_options_from(const json& node) {
  CsvOptions options;
  if (node.contains("missing_values")) {
    if (!node["missing_values"].is_array())
      throw ConfigError("config: 'missing_values' must be an array of strings");
    options.missing_sentinels.clear();
    for (const auto& sentinel : node["missing_values"]) {
      if (!sentinel.is_string())
        throw ConfigError("config: 'missing_values' must be an array of strings");
      options.missing_sentinels.push_back(sentinel.get<std::string>());
    }
  }
  return options;
}

VariableSpec variable_from(const json& node, const char* where) {
  const std::string name = require_string(node, "name", where);
  const std::string kind =
      node.contains("kind") ? require_string(node, "kind", where) : "continuous";
  if (kind == "continuous") return VariableSpec::make_continuous(name);
  if (kind == "squared")
    return VariableSpec::make_squared(name, require_string(node, "base", where));
  if (kind == "categorical") {
    if (!node.contains("levels") || !node["levels"].is_array())
      throw ConfigError(fmt::format(
          "{}: categorical '{}' needs a 'levels' array", where, name));
    std::vector<std::string> levels;
    for (const auto& level : node["levels"]) {
      if (!level.is_string())
        throw ConfigError(
            fmt::format("{}: levels of '{}' must be strings", where, name));
      levels.push_back(level.get<std::string>());
    }
    return VariableSpec::make_categorical(
        name, std::move(levels), require_string(node, "reference", where));
  }
  throw ConfigError(fmt::format(
      "{}: unknown predictor kind '{}' (continuous, categorical, squared)",
      where, kind));
}

}  // namespace

LoadedModel model_from_json_text(std::string_view text) {
  const json root = parse_json(text, "model config");
  LoadedModel loaded;
  loaded.csv = csv_options_from(root);

  ModelSpec& spec = loaded.spec;
  spec.outcome = require_string(root, "outcome", "model config");
  if (root.contains("outcome_transform")) {
    const std::string transform =
        require_string(root, "outcome_transform", "model config");
    if (transform == "identity") {
      spec.transform = OutcomeTransform::identity;
    } else if (transform == "log") {
      spec.transform = OutcomeTransform::log;
    } else {
      throw ConfigError(fmt::format(
          "model config: outcome_transform must be 'identity' or 'log', got '{}'",
          transform));
    }
  }
  if (!root.contains("group") || !root["group"].is_object())
    throw ConfigError("model config: missing 'group' object");
  const json& group = root["group"];
  spec.group_variable = require_string(group, "variable", "model config group");
  spec.group_a_label = require_string(group, "group_a", "model config group");
  spec.group_b_label = require_string(group, "group_b", "model config group");

  if (!root.contains("predictors") || !root["predictors"].is_array())
    throw ConfigError("model config: missing 'predictors' array");
  for (const auto& node : root["predictors"])
    spec.predictors.push_back(variable_from(node, "model config predictor"));

  spec.check();
  return loaded;
}

LoadedModel load_model(const std::filesystem::path& path) {
  return model_from_json_text(slurp(path, "model config"));
}

namespace {

void group_params_from(const json& node, const char* where, double* mean,
                       double* sd) {
  if (!node.is_object())
    throw ConfigError(fmt::format("{}: expected an object", where));
  *mean = require_number(node, "mean", where);
  *sd = require_number(node, "sd", where);
}

std::vector<double> probabilities_from(const json& node, const char* where) {
  if (!node.is_object() || !node.contains("probabilities") ||
      !node["probabilities"].is_array())
    throw ConfigError(fmt::format("{}: expected a 'probabilities' array", where));
  std::vector<double> probs;
  for (const auto& p : node["probabilities"]) {
    if (!p.is_number())
      throw ConfigError(fmt::format("{}: probabilities must be numbers", where));
    probs.push_back(p.get<double>());
  }
  return probs;
}

SyntheticGroup synthetic_group_from(const json& node, const char* where,
                                    const std::vector<ColumnLabel>& labels) {
  SyntheticGroup group;
  group.label = require_string(node, "label", where);
  const double n = require_number(node, "n", where);
  if (n < 0 || n != std::floor(n))
    throw ConfigError(fmt::format("{}: 'n' must be a non-negative integer", where));
  group.n = static_cast<std::size_t>(n);
  group.noise_sd = require_number(node, "noise_sd", where);

  if (!node.contains("coefficients") || !node["coefficients"].is_object())
    throw ConfigError(fmt::format("{}: missing 'coefficients' object", where));
  const json& coefs = node["coefficients"];
  std::unordered_map<std::string, double> by_label;
  for (const auto& [key, value] : coefs.items()) {
    if (!value.is_number())
      throw ConfigError(fmt::format("{}: coefficient '{}' must be a number",
                                    where, key));
    by_label.emplace(key, value.get<double>());
  }
  group.coefficients.reserve(labels.size());
  for (const auto& label : labels) {
    auto it = by_label.find(label.text());
    if (it == by_label.end())
      throw ConfigError(fmt::format("{}: missing coefficient for column '{}'",
                                    where, label.text()));
    group.coefficients.push_back(it->second);
    by_label.erase(it);
  }
  if (!by_label.empty())
    throw ConfigError(fmt::format("{}: coefficient '{}' matches no design column",
                                  where, by_label.begin()->first));
  return group;
}

}  // namespace

SyntheticSpec synthetic_spec_from_json_text(std::string_view text) {
  const json root = parse_json(text, "synthetic spec");
  SyntheticSpec spec;
  if (root.contains("outcome"))
    spec.outcome = require_string(root, "outcome", "synthetic spec");
  if (root.contains("group_variable"))
    spec.group_variable = require_string(root, "group_variable", "synthetic spec");
  if (root.contains("seed")) {
    const double seed = require_number(root, "seed", "synthetic spec");
    spec.seed = static_cast<std::uint64_t>(seed);
  }

  if (!root.contains("predictors") || !root["predictors"].is_array())
    throw ConfigError("synthetic spec: missing 'predictors' array");
  for (const auto& node : root["predictors"]) {
    SyntheticPredictor pred;
    pred.variable = variable_from(node, "synthetic predictor");
    switch (pred.variable.kind) {
      case VariableKind::continuous:
        if (!node.contains("group_a") || !node.contains("group_b"))
          throw ConfigError(fmt::format(
              "synthetic predictor '{}': needs 'group_a'/'group_b' mean and sd",
              pred.variable.name));
        group_params_from(node["group_a"], "synthetic predictor group_a",
                          &pred.mean_a, &pred.sd_a);
        group_params_from(node["group_b"], "synthetic predictor group_b",
                          &pred.mean_b, &pred.sd_b);
        break;
      case VariableKind::categorical:
        if (!node.contains("group_a") || !node.contains("group_b"))
          throw ConfigError(fmt::format(
              "synthetic predictor '{}': needs per-group 'probabilities'",
              pred.variable.name));
        pred.probs_a = probabilities_from(node["group_a"],
                                          "synthetic predictor group_a");
        pred.probs_b = probabilities_from(node["group_b"],
                                          "synthetic predictor group_b");
        break;
      case VariableKind::squared:
        break;
    }
    spec.predictors.push_back(std::move(pred));
  }

  const std::vector<ColumnLabel> labels = spec.design_labels();
  if (!root.contains("group_a") || !root.contains("group_b"))
    throw ConfigError("synthetic spec: missing 'group_a'/'group_b' objects");
  spec.group_a = synthetic_group_from(root["group_a"], "synthetic group_a", labels);
  spec.group_b = synthetic_group_from(root["group_b"], "synthetic group_b", labels);

  spec.check();
  return spec;
}

SyntheticSpec load_synthetic_spec(const std::filesystem::path& path) {
  return synthetic_spec_from_json_text(slurp(path, "synthetic spec"));
}

McaConfig mca_config_from_json_text(std::string_view text) {
  const json root = parse_json(text, "mca config");
  McaConfig config;
  config.csv = csv_options_from(root);
  if (root.contains("score_column"))
    config.score_column = require_string(root, "score_column", "mca config");

  if (!root.contains("variables") || !root["variables"].is_array())
    throw ConfigError("mca config: missing 'variables' array");
  for (const auto& node : root["variables"]) {
    VariableSpec var;
    var.kind = VariableKind::categorical;
    if (node.is_string()) {
      // Bare name: levels discovered from the data.
      var.name = node.get<std::string>();
    } else if (node.is_object()) {
      var.name = require_string(node, "name", "mca variable");
      if (node.contains("levels")) {
        if (!node["levels"].is_array())
          throw ConfigError(fmt::format(
              "mca config: levels of '{}' must be an array", var.name));
        for (const auto& level : node["levels"]) {
          if (!level.is_string())
            throw ConfigError(fmt::format(
                "mca config: levels of '{}' must be strings", var.name));
          var.levels.push_back(level.get<std::string>());
        }
      }
    } else {
      throw ConfigError("mca config: variables must be names or objects");
    }
    config.variables.push_back(std::move(var));
  }
  if (root.contains("anchor")) {
    const json& anchor = root["anchor"];
    config.options.positive_anchor =
        McaCategory{require_string(anchor, "variable", "mca anchor"),
                    require_string(anchor, "level", "mca anchor")};
  }
  return config;
}

McaConfig load_mca_config(const std::filesystem::path& path) {
  return mca_config_from_json_text(slurp(path, "mca config"));
}

}  // namespace oaxaca
