// Command-line front door: fit, decompose, score, synth, check.
//
// Exit codes: 0 success, 1 validation/config failure, 2 numerical failure,
// 3 I/O failure.

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "oaxaca/csv.hpp"
#include "oaxaca/errors.hpp"
#include "oaxaca/pipeline.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitNumeric = 2;
constexpr int kExitIo = 3;

struct CliOptions {
  oaxaca::RunConfig run;
  std::string reference = "female";
  std::string format = "text";
  std::size_t bootstrap = 0;
  double level = 0.95;
  std::uint64_t seed = 0;
  bool seed_given = false;
};

void add_io_options(CLI::App* cmd, CliOptions* options, bool with_input = true) {
  if (with_input)
    cmd->add_option("--input", options->run.input_path, "Input CSV file")
        ->required();
  cmd->add_option("--model", options->run.model_path, "JSON configuration file")
      ->required();
  cmd->add_option("--output", options->run.output_path,
                  "Output file (default: stdout)");
}

void add_format_option(CLI::App* cmd, CliOptions* options) {
  cmd->add_option("--format", options->format, "Output format")
      ->check(CLI::IsMember({"text", "json", "csv"}))
      ->capture_default_str();
}

oaxaca::RunConfig finalize(CliOptions& options) {
  options.run.reference = oaxaca::reference_from_string(options.reference);
  options.run.format = oaxaca::output_format_from_string(options.format);
  options.run.level = options.level;
  if (options.bootstrap > 0) {
    oaxaca::BootstrapConfig bootstrap;
    bootstrap.replications = options.bootstrap;
    bootstrap.level = options.level;
    bootstrap.seed = options.seed;
    options.run.bootstrap = bootstrap;
  }
  return options.run;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Oaxaca-Blinder wage gap decomposition toolkit"};
  app.require_subcommand(1);

  CliOptions fit_options;
  CLI::App* fit = app.add_subcommand("fit", "Estimate both wage equations");
  add_io_options(fit, &fit_options);
  add_format_option(fit, &fit_options);
  fit->add_option("--level", fit_options.level, "Confidence level")
      ->capture_default_str();

  CliOptions dec_options;
  CLI::App* decompose = app.add_subcommand(
      "decompose", "Twofold and threefold decompositions with detail table");
  add_io_options(decompose, &dec_options);
  add_format_option(decompose, &dec_options);
  decompose
      ->add_option("--reference", dec_options.reference,
                   "Non-discriminatory wage structure")
      ->check(CLI::IsMember({"female", "male"}))
      ->capture_default_str();
  decompose->add_option("--bootstrap", dec_options.bootstrap,
                        "Bootstrap replications (0 disables)");
  decompose->add_option("--level", dec_options.level, "Interval level")
      ->capture_default_str();
  decompose->add_option("--seed", dec_options.seed, "Bootstrap seed");

  CliOptions score_options;
  CLI::App* score = app.add_subcommand(
      "score", "Augment an asset CSV with the MCA socioeconomic score");
  add_io_options(score, &score_options);

  CliOptions synth_options;
  CLI::App* synth = app.add_subcommand(
      "synth", "Generate a synthetic dataset from a DGP specification");
  add_io_options(synth, &synth_options, /*with_input=*/false);
  synth->add_option("--seed", synth_options.seed, "Override the spec's seed");
  synth->parse_complete_callback(
      [&] { synth_options.seed_given = synth->count("--seed") > 0; });

  CliOptions check_options;
  CLI::App* check = app.add_subcommand(
      "check", "Run decomposition additivity and bridge diagnostics");
  add_io_options(check, &check_options);
  add_format_option(check, &check_options);

  CLI11_PARSE(app, argc, argv);

  try {
    if (fit->parsed()) {
      const oaxaca::RunConfig config = finalize(fit_options);
      oaxaca::emit_output(render_fit(oaxaca::run_fit(config), config.format),
                          config.output_path);
      return kExitOk;
    }
    if (decompose->parsed()) {
      const oaxaca::RunConfig config = finalize(dec_options);
      oaxaca::emit_output(
          render_decompose(oaxaca::run_decompose(config), config.format),
          config.output_path);
      return kExitOk;
    }
    if (score->parsed()) {
      const oaxaca::RunConfig config = finalize(score_options);
      const oaxaca::ScoreResult result = oaxaca::run_score(config);
      if (config.output_path.empty()) {
        std::cout << oaxaca::write_csv_text(result.scored);
      } else {
        oaxaca::write_csv(result.scored, config.output_path);
      }
      std::cerr << "scored " << result.scored_rows << " rows";
      if (result.skipped_rows > 0)
        std::cerr << " (" << result.skipped_rows
                  << " skipped: missing asset cells)";
      std::cerr << "\n";
      return kExitOk;
    }
    if (synth->parsed()) {
      const oaxaca::RunConfig config = finalize(synth_options);
      std::optional<std::uint64_t> seed;
      if (synth_options.seed_given) seed = synth_options.seed;
      const oaxaca::Dataset data = oaxaca::run_synth(config, seed);
      if (config.output_path.empty()) {
        std::cout << oaxaca::write_csv_text(data);
      } else {
        oaxaca::write_csv(data, config.output_path);
      }
      return kExitOk;
    }
    if (check->parsed()) {
      const oaxaca::RunConfig config = finalize(check_options);
      const oaxaca::CheckReport report = oaxaca::run_check(config);
      oaxaca::emit_output(render_check(report, config.format), config.output_path);
      return report.ok() ? kExitOk : kExitNumeric;
    }
  } catch (const oaxaca::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const oaxaca::NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const oaxaca::IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitNumeric;
  }
  return kExitOk;
}
