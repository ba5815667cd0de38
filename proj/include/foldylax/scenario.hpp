#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "foldylax/geometry.hpp"
#include "foldylax/system.hpp"
#include "foldylax/types.hpp"

namespace foldylax {

// Versioned scenario document (schema 1):
//
// {
//   "schema": 1,
//   "bodies": [{"kind": "sphere", "center": [x,y,z], "radius": r},
//              {"kind": "mesh", "center": [x,y,z], "mesh_path": "b.off", "scale": s}],
//   "domain_diameter": D,                                  // optional
//   "wave": {"k_re": 1, "k_im": 0, "theta": [0,0,1], "p": [1,0,0]},
//   "task": {"type": "solve" | "tensor" | "farfield" | "nearfield" | "budget" | "validate", ...},
//   "solver": {"method": "auto|direct|neumann", "tol": 1e-12, "max_iter": 10000, "direct_cap": 500},
//   "regime_threshold": 1.0,
//   "sphere_tensors": "analytic" | "bem", "sphere_subdivisions": 3
// }
//
// farfield task: "taus": [[...], ...] or "grid": {"n_theta": .., "n_phi": ..};
// default is the forward and backward directions.
// nearfield task: "points": [[...], ...], or "line": {"from", "to", "n"}, or
// "sphere": {"center", "radius", "n_theta", "n_phi"}.

struct BodySpec {
  std::string kind;  // "sphere" | "mesh"
  Vec3 center = Vec3::Zero();
  double radius = 0.0;
  std::string mesh_path;  // resolved against the scenario directory
  double scale = 1.0;
};

struct WaveSpec {
  double k_re = 1.0;
  double k_im = 0.0;
  Vec3 theta = Vec3::UnitZ();
  Vec3 p = Vec3::UnitX();
};

struct DirectionGrid {
  int n_theta = 0;
  int n_phi = 0;
};

struct TaskSpec {
  std::string type;  // empty when the document does not name one
  std::vector<Vec3> taus;
  std::optional<DirectionGrid> tau_grid;
  std::vector<Vec3> points;
};

struct SolverSpec {
  MethodChoice method = MethodChoice::Auto;
  double tol = 1e-12;
  int max_iter = 10000;
  std::size_t direct_cap = 500;
};

struct Scenario {
  int schema = 1;
  std::vector<BodySpec> bodies;
  std::optional<double> domain_diameter;
  WaveSpec wave;
  TaskSpec task;
  SolverSpec solver;
  double regime_threshold = 1.0;
  bool bem_spheres = false;
  int sphere_subdivisions = 3;
  std::optional<std::uint64_t> seed;
};

/// Parses and validates a scenario. Errors are ConfigParse and name the
/// offending field, e.g. "bodies[1].radius: must be a positive number".
Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir = {});
Scenario load_scenario(const std::string& path);

// Directions on a (theta, phi) grid; poles appear once.
std::vector<Vec3> direction_grid(const DirectionGrid& grid);

Cluster build_cluster(const Scenario& scenario);
PlaneWave build_wave(const Scenario& scenario);
std::vector<BodyTensors> build_tensors(const Scenario& scenario, const Cluster& cluster);

}  // namespace foldylax
