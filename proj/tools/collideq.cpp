#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "collideq/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"collideq: collision-model simulator for an open spin-1/2 system"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> steps;
  app.add_option("--config", config_path, "run configuration file")->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "RNG seed (overrides the config)");
  app.add_option("--out", out_dir, "output directory (overrides the config)");
  app.add_option("--steps", steps, "number of collisions (overrides the config)")->check(CLI::PositiveNumber);

  const char* descriptions[] = {"Markovian collision chain, writes trajectory.csv",
                                "three-body dynamical cell, writes trajectory.csv",
                                "homogenization run, trace distance and fidelity to the mean environment state",
                                "Gaussian beta-noise sweep: asymptotic fluctuations and cloud area",
                                "inter-environment coupling sweep for the (|+>,|->) pair",
                                "BLP non-Markovianity maximized over antipodal pure pairs",
                                "synchrony of trace-distance increments, Landauer gap and mutual information"};
  std::size_t k = 0;
  for (const auto& name : collideq::subcommands()) app.add_subcommand(name, descriptions[k++]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    collideq::RunConfig cfg = config_path.empty() ? collideq::parse_config("") : collideq::load_config(config_path);
    if (seed) cfg.env.seed = *seed;
    if (out_dir) cfg.output_dir = *out_dir;
    if (steps) cfg.n_steps = *steps;
    return collideq::dispatch(app.get_subcommands().front()->get_name(), cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "collideq: error: " << e.what() << "\n";
    return 1;
  }
}
