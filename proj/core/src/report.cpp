#include "oaxaca/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "oaxaca/csv.hpp"
#include "oaxaca/errors.hpp"

namespace oaxaca {

using ordered_json = nlohmann::ordered_json;

OutputFormat output_format_from_string(std::string_view text) {
  if (text == "text") return OutputFormat::text;
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  throw ConfigError(fmt::format("unknown output format '{}'", std::string(text)));
}

ModelSummary ModelSummary::from(const ModelSpec& spec) {
  ModelSummary summary;
  summary.outcome = spec.outcome;
  summary.transform = spec.transform;
  summary.group_variable = spec.group_variable;
  summary.group_a_label = spec.group_a_label;
  summary.group_b_label = spec.group_b_label;
  return summary;
}

bool CheckReport::ok() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const IdentityCheck& c) { return c.pass; });
}

namespace {

const char* transform_name(OutcomeTransform transform) {
  return transform == OutcomeTransform::log ? "log" : "identity";
}

// Machine formats carry full precision (shortest round-trip form).
std::string full(double value) {
  if (std::isnan(value)) return "";
  char buffer[32];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc{}) return "";
  return std::string(buffer, ptr);
}

// Display formats round to 3 decimals.
std::string disp(double value) {
  if (std::isnan(value)) return "NA";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  return fmt::format("{:.3f}", value);
}

ordered_json json_number(double value) {
  // NaN/inf have no JSON representation; nlohmann would emit null anyway,
  // this makes the intent explicit.
  if (!std::isfinite(value)) return nullptr;
  return value;
}

ordered_json model_json(const ModelSummary& model) {
  ordered_json j;
  j["outcome"] = model.outcome;
  j["transform"] = transform_name(model.transform);
  j["group_variable"] = model.group_variable;
  j["group_a"] = model.group_a_label;
  j["group_b"] = model.group_b_label;
  return j;
}

ordered_json data_json(const DataSummary& data) {
  ordered_json j;
  j["rows_read"] = data.rows_read;
  j["rows_dropped_missing"] = data.rows_dropped_missing;
  j["rows_dropped_group"] = data.rows_dropped_group;
  j["group_a_rows"] = data.group_a_rows;
  j["group_b_rows"] = data.group_b_rows;
  return j;
}

struct TextTable {
  std::vector<std::vector<std::string>> rows;
  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
  std::string render(std::size_t indent = 0) const {
    std::vector<std::size_t> widths;
    for (const auto& row : rows) {
      if (widths.size() < row.size()) widths.resize(row.size(), 0);
      for (std::size_t c = 0; c < row.size(); ++c)
        widths[c] = std::max(widths[c], row[c].size());
    }
    std::string out;
    for (const auto& row : rows) {
      out.append(indent, ' ');
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c > 0) out.append("  ");
        out += row[c];
        if (c + 1 < row.size())
          out.append(widths[c] - row[c].size(), ' ');
      }
      out.push_back('\n');
    }
    return out;
  }
};

std::string coefficient_cell(double estimate, const std::string& stars,
                             const Interval& interval) {
  return fmt::format("{}{} ({}, {})", disp(estimate), stars, disp(interval.low),
                     disp(interval.high));
}

// ---------------------------------------------------------------------------
// fit

std::string render_fit_text(const FitReport& report) {
  std::ostringstream out;
  out << "Wage equation estimates\n";
  out << fmt::format("outcome: {} ({})   group variable: {}\n",
                     report.model.outcome, transform_name(report.model.transform),
                     report.model.group_variable);
  out << fmt::format(
      "rows read: {}   dropped missing: {}   dropped group: {}\n\n",
      report.data.rows_read, report.data.rows_dropped_missing,
      report.data.rows_dropped_group);

  const auto stars_b = significance_stars(report.fit_b);
  const auto stars_a = significance_stars(report.fit_a);

  TextTable table;
  table.add({"Term", report.model.group_b_label, report.model.group_a_label});
  for (Eigen::Index i = 0; i < report.fit_b.coefficients.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    table.add({report.fit_b.labels[idx].text(),
               coefficient_cell(report.fit_b.coefficients(i), stars_b[idx],
                                report.intervals_b[idx]),
               coefficient_cell(report.fit_a.coefficients(i), stars_a[idx],
                                report.intervals_a[idx])});
  }
  table.add({"", "", ""});
  table.add({"Observations", fmt::format("{}", report.fit_b.n),
             fmt::format("{}", report.fit_a.n)});
  table.add({"R^2", disp(report.fit_b.r_squared), disp(report.fit_a.r_squared)});
  table.add({"Adjusted R^2", disp(report.fit_b.adj_r_squared),
             disp(report.fit_a.adj_r_squared)});
  table.add({"Residual Std. Error",
             fmt::format("{} (df = {:.0f})", disp(report.fit_b.residual_std_error),
                         report.fit_b.f_statistic.df2),
             fmt::format("{} (df = {:.0f})", disp(report.fit_a.residual_std_error),
                         report.fit_a.f_statistic.df2)});
  auto f_cell = [](const OlsFit& fit) {
    const double p = f_statistic_p_value(fit.f_statistic);
    return fmt::format("{}{} (df = {:.0f}; {:.0f})", disp(fit.f_statistic.value),
                       std::isnan(p) ? "" : significance_stars(p),
                       fit.f_statistic.df1, fit.f_statistic.df2);
  };
  table.add({"F Statistic", f_cell(report.fit_b), f_cell(report.fit_a)});
  out << table.render();
  out << fmt::format("\nCI level: {:.0f}%   Note: *p<0.1; **p<0.05; ***p<0.01\n",
                     report.level * 100.0);
  return out.str();
}

ordered_json fit_group_json(const OlsFit& fit, const std::vector<Interval>& intervals,
                            const std::string& label, const char* which) {
  ordered_json j;
  j["group"] = which;
  j["label"] = label;
  j["n"] = fit.n;
  j["r_squared"] = json_number(fit.r_squared);
  j["adj_r_squared"] = json_number(fit.adj_r_squared);
  j["residual_std_error"] = json_number(fit.residual_std_error);
  j["residual_df"] = json_number(fit.df_residual());
  j["f_statistic"] = json_number(fit.f_statistic.value);
  j["f_df1"] = json_number(fit.f_statistic.df1);
  j["f_df2"] = json_number(fit.f_statistic.df2);
  j["f_p_value"] = json_number(f_statistic_p_value(fit.f_statistic));
  ordered_json coefficients = ordered_json::array();
  for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
    const auto idx = static_cast<std::size_t>(i);
    ordered_json c;
    c["term"] = fit.labels[idx].text();
    c["estimate"] = json_number(fit.coefficients(i));
    c["std_error"] = json_number(fit.std_error(i));
    c["t_value"] = json_number(fit.t_value(i));
    c["p_value"] = json_number(fit.p_value(i));
    c["stars"] = significance_stars(fit.p_value(i));
    c["ci_low"] = json_number(intervals[idx].low);
    c["ci_high"] = json_number(intervals[idx].high);
    coefficients.push_back(std::move(c));
  }
  j["coefficients"] = std::move(coefficients);
  return j;
}

std::string render_fit_json(const FitReport& report) {
  ordered_json j;
  j["command"] = "fit";
  j["level"] = report.level;
  j["model"] = model_json(report.model);
  j["data"] = data_json(report.data);
  j["groups"] = ordered_json::array();
  j["groups"].push_back(fit_group_json(report.fit_b, report.intervals_b,
                                       report.model.group_b_label, "b"));
  j["groups"].push_back(fit_group_json(report.fit_a, report.intervals_a,
                                       report.model.group_a_label, "a"));
  return j.dump(2) + "\n";
}

std::string render_fit_csv(const FitReport& report) {
  Dataset table;
  table.columns = {"group", "kind",    "term",  "estimate", "std_error",
                   "t_value", "p_value", "stars", "ci_low",   "ci_high"};
  auto emit_group = [&](const OlsFit& fit, const std::vector<Interval>& intervals,
                        const std::string& label) {
    for (Eigen::Index i = 0; i < fit.coefficients.size(); ++i) {
      const auto idx = static_cast<std::size_t>(i);
      table.rows.push_back({label, std::string("coefficient"),
                            fit.labels[idx].text(), full(fit.coefficients(i)),
                            full(fit.std_error(i)), full(fit.t_value(i)),
                            full(fit.p_value(i)), significance_stars(fit.p_value(i)),
                            full(intervals[idx].low), full(intervals[idx].high)});
    }
    auto stat = [&](const char* name, double value) {
      table.rows.push_back({label, std::string("statistic"), std::string(name),
                            full(value), std::nullopt, std::nullopt, std::nullopt,
                            std::nullopt, std::nullopt, std::nullopt});
    };
    stat("n", static_cast<double>(fit.n));
    stat("r_squared", fit.r_squared);
    stat("adj_r_squared", fit.adj_r_squared);
    stat("residual_std_error", fit.residual_std_error);
    stat("f_statistic", fit.f_statistic.value);
    stat("f_df1", fit.f_statistic.df1);
    stat("f_df2", fit.f_statistic.df2);
  };
  emit_group(report.fit_b, report.intervals_b, report.model.group_b_label);
  emit_group(report.fit_a, report.intervals_a, report.model.group_a_label);
  return write_csv_text(table);
}

// ---------------------------------------------------------------------------
// decompose

const char* detail_kind_name(DetailRow::Kind kind) {
  switch (kind) {
    case DetailRow::Kind::intercept:
      return "intercept";
    case DetailRow::Kind::term:
      return "term";
    case DetailRow::Kind::variable_total:
      return "variable_total";
    case DetailRow::Kind::overall:
      return "overall";
  }
  return "term";
}

std::string render_decompose_text(const DecomposeReport& report) {
  std::ostringstream out;
  out << fmt::format("Oaxaca-Blinder decomposition (reference: {})\n",
                     to_string(report.reference));
  out << fmt::format("outcome: {} ({})   groups: {} (a) vs {} (b)\n",
                     report.model.outcome, transform_name(report.model.transform),
                     report.model.group_a_label, report.model.group_b_label);
  out << fmt::format(
      "rows read: {}   dropped missing: {}   dropped group: {}\n\n",
      report.data.rows_read, report.data.rows_dropped_missing,
      report.data.rows_dropped_group);

  out << fmt::format("Mean outcome (fitted): {} {}   {} {}\n",
                     report.model.group_a_label, disp(report.group_a_mean),
                     report.model.group_b_label, disp(report.group_b_mean));
  out << fmt::format("Overall gap: {}   additivity residual: {:.3e}\n\n",
                     disp(report.threefold.gap), report.additivity_residual);

  auto interval_suffix = [&](const char* key) -> std::string {
    if (!report.bootstrap.has_value()) return "";
    const ComponentInterval* entry = report.bootstrap->find(key);
    if (entry == nullptr) return "";
    return fmt::format("  [{}, {}]", disp(entry->low), disp(entry->high));
  };

  TextTable totals;
  totals.add({"Twofold", "", ""});
  totals.add({"  explained", disp(report.twofold.explained), ""});
  totals.add({"  unexplained", disp(report.twofold.unexplained), ""});
  totals.add({"Threefold", "", ""});
  totals.add({"  endowments", disp(report.threefold.endowments),
              interval_suffix("endowments")});
  totals.add({"  coefficients", disp(report.threefold.coefficients),
              interval_suffix("coefficients")});
  totals.add({"  interaction", disp(report.threefold.interaction),
              interval_suffix("interaction")});
  totals.add({"  discrimination", disp(report.threefold.discrimination),
              interval_suffix("discrimination")});
  totals.add({"Counterfactual wage (group a)",
              disp(report.threefold.counterfactual_wage_a), ""});
  out << totals.render();

  out << "\nThreefold detail by variable\n";
  TextTable detail;
  if (report.bootstrap.has_value()) {
    detail.add({"Row", "Endowments", "", "Coefficients", "", "Interaction", "",
                "Nepotism"});
  } else {
    detail.add({"Row", "Endowments", "Coefficients", "Interaction", "Nepotism"});
  }
  for (const auto& row : report.detail) {
    std::string name = row.key();
    if (row.kind == DetailRow::Kind::term && !row.level.empty())
      name = fmt::format("  {}", row.level);
    if (row.kind == DetailRow::Kind::variable_total)
      name = fmt::format("{} (total)", row.variable);
    if (report.bootstrap.has_value()) {
      auto iv = [&](const char* family) -> std::string {
        const auto* entry =
            report.bootstrap->find(fmt::format("{}:{}", family, row.key()));
        if (entry == nullptr) return "";
        return fmt::format("[{}, {}]", disp(entry->low), disp(entry->high));
      };
      detail.add({name, disp(row.endowments), iv("endowments"),
                  disp(row.coefficients), iv("coefficients"),
                  disp(row.interaction), iv("interaction"), disp(row.nepotism)});
    } else {
      detail.add({name, disp(row.endowments), disp(row.coefficients),
                  disp(row.interaction), disp(row.nepotism)});
    }
  }
  out << detail.render();

  if (report.bootstrap.has_value()) {
    const auto& bootstrap = *report.bootstrap;
    out << fmt::format(
        "\nBootstrap: {:.0f}% percentile intervals, B = {}, seed = {}, "
        "discarded replicates = {}\n",
        bootstrap.config.level * 100.0, bootstrap.config.replications,
        bootstrap.config.seed, bootstrap.discarded);
  }
  return out.str();
}

std::string render_decompose_json(const DecomposeReport& report) {
  ordered_json j;
  j["command"] = "decompose";
  j["reference"] = to_string(report.reference);
  j["model"] = model_json(report.model);
  j["data"] = data_json(report.data);
  j["group_a_mean"] = json_number(report.group_a_mean);
  j["group_b_mean"] = json_number(report.group_b_mean);
  j["gap"] = json_number(report.threefold.gap);
  j["additivity_residual"] = json_number(report.additivity_residual);

  ordered_json twofold;
  twofold["reference"] = to_string(report.twofold.reference);
  twofold["explained"] = json_number(report.twofold.explained);
  twofold["unexplained"] = json_number(report.twofold.unexplained);
  ordered_json columns = ordered_json::array();
  for (const auto& column : report.twofold.per_column) {
    ordered_json c;
    c["term"] = column.label.text();
    c["explained"] = json_number(column.explained);
    c["unexplained"] = json_number(column.unexplained);
    columns.push_back(std::move(c));
  }
  twofold["per_column"] = std::move(columns);
  j["twofold"] = std::move(twofold);

  ordered_json threefold;
  threefold["reference"] = to_string(report.threefold.reference);
  threefold["endowments"] = json_number(report.threefold.endowments);
  threefold["coefficients"] = json_number(report.threefold.coefficients);
  threefold["interaction"] = json_number(report.threefold.interaction);
  threefold["discrimination"] = json_number(report.threefold.discrimination);
  threefold["counterfactual_wage_a"] =
      json_number(report.threefold.counterfactual_wage_a);
  ordered_json detail = ordered_json::array();
  for (const auto& row : report.detail) {
    ordered_json d;
    d["row"] = row.key();
    d["kind"] = detail_kind_name(row.kind);
    d["variable"] = row.variable;
    d["level"] = row.level;
    d["endowments"] = json_number(row.endowments);
    d["coefficients"] = json_number(row.coefficients);
    d["interaction"] = json_number(row.interaction);
    d["nepotism"] = json_number(row.nepotism);
    detail.push_back(std::move(d));
  }
  threefold["detail"] = std::move(detail);
  j["threefold"] = std::move(threefold);

  if (report.bootstrap.has_value()) {
    const auto& bootstrap = *report.bootstrap;
    ordered_json b;
    b["replications"] = bootstrap.config.replications;
    b["level"] = bootstrap.config.level;
    b["seed"] = bootstrap.config.seed;
    b["discarded"] = bootstrap.discarded;
    b["used"] = bootstrap.used;
    ordered_json intervals = ordered_json::array();
    for (const auto& entry : bootstrap.entries) {
      ordered_json e;
      e["key"] = entry.key;
      e["point"] = json_number(entry.point);
      e["low"] = json_number(entry.low);
      e["high"] = json_number(entry.high);
      intervals.push_back(std::move(e));
    }
    b["intervals"] = std::move(intervals);
    j["bootstrap"] = std::move(b);
  }
  return j.dump(2) + "\n";
}

std::string render_decompose_csv(const DecomposeReport& report) {
  Dataset table;
  table.columns = {"component", "scope", "variable", "level",
                   "value",     "low",   "high"};
  auto interval_of = [&](const std::string& key)
      -> std::pair<std::optional<std::string>, std::optional<std::string>> {
    if (!report.bootstrap.has_value()) return {std::nullopt, std::nullopt};
    const auto* entry = report.bootstrap->find(key);
    if (entry == nullptr) return {std::nullopt, std::nullopt};
    return {full(entry->low), full(entry->high)};
  };
  auto total = [&](const char* component, double value) {
    auto [low, high] = interval_of(component);
    table.rows.push_back({std::string(component), std::string("total"),
                          std::nullopt, std::nullopt, full(value), low, high});
  };
  total("gap", report.threefold.gap);
  total("explained", report.twofold.explained);
  total("unexplained", report.twofold.unexplained);
  total("endowments", report.threefold.endowments);
  total("coefficients", report.threefold.coefficients);
  total("interaction", report.threefold.interaction);
  total("discrimination", report.threefold.discrimination);
  total("counterfactual_wage_a", report.threefold.counterfactual_wage_a);
  total("group_a_mean", report.group_a_mean);
  total("group_b_mean", report.group_b_mean);

  for (const auto& column : report.twofold.per_column) {
    table.rows.push_back({std::string("explained"), std::string("column"),
                          column.label.text(), std::nullopt,
                          full(column.explained), std::nullopt, std::nullopt});
    table.rows.push_back({std::string("unexplained"), std::string("column"),
                          column.label.text(), std::nullopt,
                          full(column.unexplained), std::nullopt, std::nullopt});
  }

  for (const auto& row : report.detail) {
    const std::optional<std::string> level =
        row.level.empty() ? std::optional<std::string>{} : row.level;
    auto emit = [&](const char* family, double value, bool with_interval) {
      auto [low, high] =
          with_interval && row.kind != DetailRow::Kind::overall
              ? interval_of(fmt::format("{}:{}", family, row.key()))
              : std::pair<std::optional<std::string>, std::optional<std::string>>{
                    std::nullopt, std::nullopt};
      table.rows.push_back({std::string(family),
                            std::string(detail_kind_name(row.kind)),
                            row.variable.empty() ? std::optional<std::string>{}
                                                 : row.variable,
                            level, full(value), low, high});
    };
    emit("endowments", row.endowments, true);
    emit("coefficients", row.coefficients, true);
    emit("interaction", row.interaction, true);
    emit("nepotism", row.nepotism, false);
  }
  return write_csv_text(table);
}

// ---------------------------------------------------------------------------
// check

std::string render_check_text(const CheckReport& report) {
  std::ostringstream out;
  out << "Decomposition consistency diagnostics\n";
  out << fmt::format("outcome: {} ({})\n\n", report.model.outcome,
                     transform_name(report.model.transform));
  TextTable table;
  table.add({"Identity", "lhs", "rhs", "|diff|/scale", "status"});
  for (const auto& check : report.checks) {
    table.add({check.name, fmt::format("{:.6f}", check.lhs),
               fmt::format("{:.6f}", check.rhs),
               fmt::format("{:.3e}", check.scaled_diff),
               check.pass ? "ok" : "FAILED"});
  }
  out << table.render();
  out << fmt::format("\n{}\n", report.ok() ? "all identities hold"
                                           : "IDENTITY VIOLATIONS FOUND");
  return out.str();
}

std::string render_check_json(const CheckReport& report) {
  ordered_json j;
  j["command"] = "check";
  j["model"] = model_json(report.model);
  j["data"] = data_json(report.data);
  j["ok"] = report.ok();
  ordered_json checks = ordered_json::array();
  for (const auto& check : report.checks) {
    ordered_json c;
    c["name"] = check.name;
    c["lhs"] = json_number(check.lhs);
    c["rhs"] = json_number(check.rhs);
    c["scaled_diff"] = json_number(check.scaled_diff);
    c["pass"] = check.pass;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  return j.dump(2) + "\n";
}

std::string render_check_csv(const CheckReport& report) {
  Dataset table;
  table.columns = {"name", "lhs", "rhs", "scaled_diff", "pass"};
  for (const auto& check : report.checks) {
    table.rows.push_back({check.name, full(check.lhs), full(check.rhs),
                          full(check.scaled_diff),
                          std::string(check.pass ? "true" : "false")});
  }
  return write_csv_text(table);
}

}  // namespace

std::string render_fit(const FitReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::text:
      return render_fit_text(report);
    case OutputFormat::json:
      return render_fit_json(report);
    case OutputFormat::csv:
      return render_fit_csv(report);
  }
  throw std::invalid_argument("render_fit: unknown format");
}

std::string render_decompose(const DecomposeReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::text:
      return render_decompose_text(report);
    case OutputFormat::json:
      return render_decompose_json(report);
    case OutputFormat::csv:
      return render_decompose_csv(report);
  }
  throw std::invalid_argument("render_decompose: unknown format");
}

std::string render_check(const CheckReport& report, OutputFormat format) {
  switch (format) {
    case OutputFormat::text:
      return render_check_text(report);
    case OutputFormat::json:
      return render_check_json(report);
    case OutputFormat::csv:
      return render_check_csv(report);
  }
  throw std::invalid_argument("render_check: unknown format");
}

}  // namespace oaxaca
