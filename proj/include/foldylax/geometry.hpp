#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "foldylax/mesh.hpp"
#include "foldylax/types.hpp"

namespace foldylax {

struct AnalyticSphere {
  double radius = 0.0;
};

// Surface given in body-local coordinates; the local origin must lie
// inside it (it is the body's reference point z_i after translation).
struct MeshShape {
  SurfaceMesh surface;
};

class BodyShape {
 public:
  static BodyShape sphere(const Vec3& center, double radius);
  static BodyShape mesh(const Vec3& center, SurfaceMesh surface);

  const Vec3& center() const { return center_; }
  bool is_sphere() const { return sphere_.has_value(); }
  const AnalyticSphere& sphere_shape() const { return *sphere_; }
  const MeshShape& mesh_shape() const { return *mesh_; }

  double diameter() const { return diameter_; }

  // Distance from a point to the body surface (negative
  // inside a sphere). For meshes this is the distance to the nearest vertex.
  double distance_to(const Vec3& point) const;

  // Points realizing the body's extent in world coordinates (sphere: axis
  // extremes; mesh: translated vertices).
  std::vector<Vec3> extent_points() const;

 private:
  BodyShape() = default;

  Vec3 center_ = Vec3::Zero();
  std::optional<AnalyticSphere> sphere_;
  std::optional<MeshShape> mesh_;
  double diameter_ = 0.0;
};

double body_distance(const BodyShape& a, const BodyShape& b);

struct EpsilonDelta {
  double epsilon = 0.0;
  double delta = 0.0;  // +inf for a single body
};

/// eps = max body diameter, delta = min pairwise boundary distance.
/// Throws EmptyCluster for no bodies, OverlappingBodies if some pair has
/// distance <= 0. Mesh-to-mesh and sphere-to-mesh distances use vertices and
/// are accurate to one panel diameter.
EpsilonDelta compute_epsilon_delta(const std::vector<BodyShape>& bodies);

class Cluster {
 public:
  // domain_diameter defaults to the diameter of a bounding ball of the
  // bodies plus 2*delta. A supplied value smaller than the cluster's
  // point-set diameter is rejected.
  Cluster(std::vector<BodyShape> bodies, std::optional<double> domain_diameter = std::nullopt);

  const std::vector<BodyShape>& bodies() const { return bodies_; }
  std::size_t size() const { return bodies_.size(); }
  double epsilon() const { return epsilon_; }
  double delta() const { return delta_; }
  double domain_diameter() const { return domain_diameter_; }
  std::vector<Vec3> centers() const;

  // Smallest distance from `point` to any body surface.
  double distance_to(const Vec3& point) const;

 private:
  std::vector<BodyShape> bodies_;
  double epsilon_ = 0.0;
  double delta_ = 0.0;
  double domain_diameter_ = 0.0;
};

/// Minimal n >= 1 with 16 n (n^2 + 3n + 3) >= m: the number of cubic shells
/// of width delta needed to host m bodies around a given one.
long shell_count(long m);

struct RegimeReport {
  double frequency_term = 0.0;    // |k|^2 eps
  double density_term = 0.0;      // (1 + |k|^2) mu+ eps^3 / delta^3
  double interaction_term = 0.0;  // (ln m^(1/3)/delta^3 + 2|k| m^(1/3)/delta^2 + m^(2/3)|k|^2/(2 delta)) eps^3
  double value = 0.0;
  double threshold = 1.0;
  bool within_threshold = true;
};

/// Evaluates the left-hand side of the sufficient validity condition for the
/// point-interaction expansion. The constant on its right-hand side depends
/// on Lipschitz characters and is not known numerically; `threshold`
/// replaces it. For m = 1 (delta = +inf) the delta-dependent terms are 0.
RegimeReport validate_regime(std::size_t m, double epsilon, double delta, std::complex<double> k,
                             double mu_plus, double threshold = 1.0);
RegimeReport validate_regime(const Cluster& cluster, std::complex<double> k, double mu_plus,
                             double threshold = 1.0);

}  // namespace foldylax
