#include <iostream>

#include <CLI11.hpp>

#include "foldylax/cli.hpp"

int main(int argc, char** argv) {
  foldylax::cli::Request req;
  CLI::App app{"Foldy-Lax scattering by clusters of small perfectly conducting bodies"};
  app.require_subcommand(1);

  std::string scenario, out;
  int threads = 0;
  std::uint64_t seed = 0;
  auto common = [&](CLI::App* sub, bool needs_scenario) {
    auto* opt = sub->add_option("--scenario", scenario, "scenario JSON file");
    if (needs_scenario) opt->required();
    sub->add_option("--out", out, "output file (default: stdout)");
    sub->add_option("--threads", threads, "worker threads (default: FOLDY_THREADS or 1)")->check(CLI::PositiveNumber);
    sub->add_option("--seed", seed, "seed for randomized helpers, recorded in output metadata");
  };
  common(app.add_subcommand("tensor", "polarization and virtual-mass tensors (JSON)"), true);
  common(app.add_subcommand("solve", "solve the Foldy-Lax system (JSON)"), true);
  common(app.add_subcommand("farfield", "far-field pattern (CSV)"), true);
  common(app.add_subcommand("nearfield", "scattered near field (CSV)"), true);
  common(app.add_subcommand("budget", "invertibility constants and error budget (JSON)"), true);
  common(app.add_subcommand("validate", "oracle checks; built-in suite without --scenario (JSON)"), false);

  auto* gen = app.add_subcommand("gen", "generate a lattice or random sphere cluster scenario (JSON)");
  common(gen, false);
  gen->add_option("--layout", req.gen.layout, "lattice | random")->check(CLI::IsMember({"lattice", "random"}));
  gen->add_option("--n", req.gen.n, "lattice bodies per axis");
  gen->add_option("--count", req.gen.count, "random body count");
  gen->add_option("--radius", req.gen.radius, "sphere radius");
  gen->add_option("--spacing", req.gen.spacing, "lattice spacing");
  gen->add_option("--box", req.gen.box, "random placement box edge");
  gen->add_option("--min-gap", req.gen.min_gap, "random minimal surface gap");
  gen->add_option("--k", req.gen.k, "wavenumber written to the scenario");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : foldylax::cli::kValidationError;
  }

  CLI::App* sub = app.get_subcommands().front();
  req.command = sub->get_name();
  req.scenario_path = scenario;
  req.out_path = out;
  if (sub->count("--threads") > 0) req.threads = threads;
  if (sub->count("--seed") > 0) req.seed = seed;
  return foldylax::cli::run(req, std::cout, std::cerr);
}
