#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bernoulli/cli_runner.hpp"

namespace cli = bernoulli::cli;

int main(int argc, char** argv) {
  CLI::App app{"Free-boundary Bernoulli solver: solves, classifies, sweeps branches and runs flows"};
  app.require_subcommand(1);
  std::string config, out;
  bool verbose = false;

  for (const auto& [name, mode] : cli::mode_names()) {
    auto* sub = app.add_subcommand(name, "run in " + name + " mode");
    sub->add_option("--config", config, "JSON run configuration")->required();
    sub->add_option("--out", out, "run directory (overrides \"output\")");
    sub->add_flag("--verbose", verbose, "progress on stderr");
  }
  auto* plot = app.add_subcommand("plot", "write curves.csv, branch.csv and drift.csv for a finished run");
  plot->add_option("--out", out, "run directory")->required();
  plot->add_flag("--verbose", verbose, "list the files written");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : cli::ConfigError;
  }

  auto* chosen = app.get_subcommands().front();
  if (chosen == plot) {
    try {
      for (const auto& p : cli::emit_plot_data(out))
        if (verbose) std::cerr << p.string() << "\n";
      return cli::Ok;
    } catch (const bernoulli::Error& e) {
      std::cout << bernoulli::error_to_json(e.kind(), e.what()).dump() << "\n";
      return cli::exit_code_for(e.kind());
    }
  }

  const auto mode = cli::parse_mode(chosen->get_name());
  std::optional<std::filesystem::path> out_dir;
  if (!out.empty()) out_dir = out;
  try {
    const auto res = cli::run_config(config, mode, out_dir, verbose);
    if (res.exit_code != cli::Ok) std::cout << res.summary.value("error", bernoulli::json::object()).dump() << "\n";
    return res.exit_code;
  } catch (const bernoulli::Error& e) {
    std::cout << bernoulli::error_to_json(e.kind(), e.what()).dump() << "\n";
    return cli::exit_code_for(e.kind());
  }
}
