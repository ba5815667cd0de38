#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace foldylax::cli {

// Options for the `gen` subcommand.
struct GenRequest {
  std::string layout = "lattice";  // "lattice" | "random"
  int n = 2;                       // lattice: n x n x n bodies
  int count = 8;                   // random: number of bodies
  double radius = 0.05;
  double spacing = 1.0;            // lattice center spacing
  double box = 1.0;                // random: centers in [0, box]^3
  double min_gap = 0.0;            // random: minimal surface gap
  double k = 1.0;
};

struct Request {
  std::string command;  // tensor | solve | farfield | nearfield | budget | validate | gen
  std::string scenario_path;
  std::string out_path;  // empty: write to the output stream
  std::optional<int> threads;
  std::optional<std::uint64_t> seed;
  GenRequest gen;
};

enum ExitCode : int { kSuccess = 0, kHardError = 1, kValidationError = 2 };

// Runs one subcommand. Diagnostics and warnings go to `err`; results go to
// the --out file or, without one, to `out`.
int run(const Request& request, std::ostream& out, std::ostream& err);

}  // namespace foldylax::cli
