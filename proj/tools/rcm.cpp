#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "rcm/harness/experiments.hpp"
#include "rcm/harness/plots.hpp"

namespace h = rcm::harness;

int main(int argc, char** argv) {
  CLI::App app{"Random-cluster model: exact enumeration, Monte Carlo and diagnostics"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 0;
  std::string csv_path;

  std::vector<std::pair<CLI::App*, h::ExperimentKind>> experiments;
  for (auto kind : {h::ExperimentKind::exact_check, h::ExperimentKind::duality_check,
                    h::ExperimentKind::selfdual_crossing, h::ExperimentKind::threshold, h::ExperimentKind::decay,
                    h::ExperimentKind::menger_check, h::ExperimentKind::influence_profile,
                    h::ExperimentKind::inequality_suite, h::ExperimentKind::estimate_pc}) {
    auto* sub = app.add_subcommand(std::string(h::to_string(kind)), "Run the " + std::string(h::to_string(kind)) +
                                                                         " experiment");
    sub->add_option("--config", config_path, "Experiment file (key = value lines)")->required();
    sub->add_option("--seed", seed, "Override the seed from the config");
    sub->add_option("--out", out_dir, "Directory for the CSV output");
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);
    experiments.emplace_back(sub, kind);
  }

  auto* plots = app.add_subcommand("emit-plots", "Write a matplotlib script for a results CSV");
  plots->add_option("--csv", csv_path, "Results CSV")->required()->check(CLI::ExistingFile);
  plots->add_option("--out", out_dir, "Directory for the script");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : h::kExitConfigError;
  }

  for (auto& [sub, kind] : experiments) {
    if (!sub->parsed()) continue;
    h::RunOptions options;
    options.out_dir = out_dir;
    if (sub->count("--seed")) options.seed = seed;
    if (sub->count("--threads")) options.threads = threads;
    return h::execute(kind, config_path, options, std::cerr);
  }

  try {
    std::ifstream in(csv_path);
    const auto records = h::read_csv(in);
    std::cerr << "wrote " << h::emit_plot_script(records, csv_path, out_dir) << '\n';
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return h::kExitConfigError;
  }
}
