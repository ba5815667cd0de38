#include "foldylax/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldylax/error.hpp"
#include "foldylax/parallel.hpp"

namespace foldylax {

BodyShape BodyShape::sphere(const Vec3& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw Error(ErrorCode::InvalidBody, "sphere radius must be positive, got " + std::to_string(radius));
  }
  BodyShape b;
  b.center_ = center;
  b.sphere_ = AnalyticSphere{radius};
  b.diameter_ = 2.0 * radius;
  return b;
}

BodyShape BodyShape::mesh(const Vec3& center, SurfaceMesh surface) {
  validate_closed_surface(surface);
  if (winding_number(surface, Vec3::Zero()) < 0.5) {
    throw Error(ErrorCode::InvalidBody, "mesh body must contain its local origin");
  }
  BodyShape b;
  b.center_ = center;
  b.diameter_ = vertex_diameter(surface);
  b.mesh_ = MeshShape{std::move(surface)};
  return b;
}

double BodyShape::distance_to(const Vec3& point) const {
  if (sphere_) return (point - center_).norm() - sphere_->radius;
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : mesh_->surface.vertices) best = std::min(best, (point - center_ - v).norm());
  return best;
}

std::vector<Vec3> BodyShape::extent_points() const {
  std::vector<Vec3> pts;
  if (sphere_) {
    for (int a = 0; a < 3; ++a) {
      Vec3 e = Vec3::Zero();
      e(a) = sphere_->radius;
      pts.push_back(center_ + e);
      pts.push_back(center_ - e);
    }
  } else {
    pts.reserve(mesh_->surface.vertices.size());
    for (const auto& v : mesh_->surface.vertices) pts.push_back(center_ + v);
  }
  return pts;
}

double body_distance(const BodyShape& a, const BodyShape& b) {
  if (a.is_sphere() && b.is_sphere()) {
    return (a.center() - b.center()).norm() - a.sphere_shape().radius - b.sphere_shape().radius;
  }
  if (a.is_sphere()) return body_distance(b, a);
  // a is a mesh: nearest vertex of a to b's surface.
  double best = std::numeric_limits<double>::infinity();
  for (const auto& v : a.mesh_shape().surface.vertices) {
    best = std::min(best, b.distance_to(a.center() + v));
  }
  return best;
}

EpsilonDelta compute_epsilon_delta(const std::vector<BodyShape>& bodies) {
  if (bodies.empty()) throw Error(ErrorCode::EmptyCluster, "cluster has no bodies");
  EpsilonDelta out;
  for (const auto& b : bodies) out.epsilon = std::max(out.epsilon, b.diameter());
  const std::size_t m = bodies.size();
  std::vector<double> row_min(m, std::numeric_limits<double>::infinity());
  std::vector<std::size_t> row_arg(m, 0);
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double d = body_distance(bodies[i], bodies[j]);
        if (d < row_min[i]) {
          row_min[i] = d;
          row_arg[i] = j;
        }
      }
    }
  });
  out.delta = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    if (row_min[i] <= 0.0) {
      throw Error(ErrorCode::OverlappingBodies, "bodies " + std::to_string(i) + " and " +
                                                    std::to_string(row_arg[i]) + " overlap or touch");
    }
    out.delta = std::min(out.delta, row_min[i]);
  }
  return out;
}

namespace {

// Ritter's bounding sphere; returns its diameter.
double bounding_ball_diameter(const std::vector<Vec3>& pts) {
  Vec3 a = pts.front();
  auto farthest = [&](const Vec3& from) {
    Vec3 best = from;
    double bd = -1.0;
    for (const auto& p : pts) {
      const double d = (p - from).squaredNorm();
      if (d > bd) {
        bd = d;
        best = p;
      }
    }
    return best;
  };
  const Vec3 b = farthest(a);
  const Vec3 c = farthest(b);
  Vec3 center = 0.5 * (b + c);
  double radius = 0.5 * (b - c).norm();
  for (const auto& p : pts) {
    const double d = (p - center).norm();
    if (d > radius) {
      const double new_radius = 0.5 * (radius + d);
      center += (d - new_radius) / d * (p - center);
      radius = new_radius;
    }
  }
  return 2.0 * radius;
}

double point_set_diameter(const std::vector<Vec3>& pts) {
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) best = std::max(best, (pts[i] - pts[j]).squaredNorm());
  }
  return std::sqrt(best);
}

}  // namespace

Cluster::Cluster(std::vector<BodyShape> bodies, std::optional<double> domain_diameter)
    : bodies_(std::move(bodies)) {
  const EpsilonDelta ed = compute_epsilon_delta(bodies_);
  epsilon_ = ed.epsilon;
  delta_ = ed.delta;
  std::vector<Vec3> pts;
  for (const auto& b : bodies_) {
    auto e = b.extent_points();
    pts.insert(pts.end(), e.begin(), e.end());
  }
  if (domain_diameter) {
    const double needed = std::max(point_set_diameter(pts), epsilon_);
    if (!(*domain_diameter >= needed * (1.0 - 1e-12))) {
      throw Error(ErrorCode::InvalidArgument, "domain_diameter " + std::to_string(*domain_diameter) +
                                                  " is smaller than the cluster extent " + std::to_string(needed));
    }
    domain_diameter_ = *domain_diameter;
  } else {
    domain_diameter_ = bounding_ball_diameter(pts) + (std::isfinite(delta_) ? 2.0 * delta_ : 0.0);
  }
}

std::vector<Vec3> Cluster::centers() const {
  std::vector<Vec3> z;
  z.reserve(bodies_.size());
  for (const auto& b : bodies_) z.push_back(b.center());
  return z;
}

double Cluster::distance_to(const Vec3& point) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& b : bodies_) best = std::min(best, b.distance_to(point));
  return best;
}

long shell_count(long m) {
  if (m < 1) throw Error(ErrorCode::InvalidArgument, "shell_count requires m >= 1");
  long n = 1;
  while (16 * n * (n * n + 3 * n + 3) < m) ++n;
  return n;
}

RegimeReport validate_regime(std::size_t m, double epsilon, double delta, std::complex<double> k,
                             double mu_plus, double threshold) {
  RegimeReport r;
  const double ak = std::abs(k);
  const double e3 = epsilon * epsilon * epsilon;
  r.frequency_term = ak * ak * epsilon;
  if (m >= 2 && std::isfinite(delta)) {
    const double md = static_cast<double>(m);
    const double cube_root = std::cbrt(md);
    r.density_term = (1.0 + ak * ak) * mu_plus * e3 / (delta * delta * delta);
    r.interaction_term = (std::log(cube_root) / (delta * delta * delta) + 2.0 * ak * cube_root / (delta * delta) +
                          cube_root * cube_root * ak * ak / (2.0 * delta)) *
                         e3;
  }
  r.value = r.frequency_term + r.density_term + r.interaction_term;
  r.threshold = threshold;
  r.within_threshold = r.value < threshold;
  return r;
}

RegimeReport validate_regime(const Cluster& cluster, std::complex<double> k, double mu_plus, double threshold) {
  return validate_regime(cluster.size(), cluster.epsilon(), cluster.delta(), k, mu_plus, threshold);
}

}  // namespace foldylax
