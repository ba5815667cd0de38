#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "foldylax/types.hpp"

namespace foldylax {

// Closed, outward-oriented triangle surface. Construction does not validate;
// call validate_closed_surface() (done by every consumer that needs it).
struct SurfaceMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  std::size_t panel_count() const { return triangles.size(); }
};

// Flat-panel quantities at panel centroids.
struct PanelGeometry {
  std::vector<Vec3> centroids;
  std::vector<Vec3> normals;  // outward unit normals
  std::vector<double> areas;

  std::size_t size() const { return areas.size(); }
  double total_area() const;
};

PanelGeometry panel_geometry(const SurfaceMesh& mesh);

double signed_volume(const SurfaceMesh& mesh);

/// Checks the manifold/orientation invariants:
///  - vertex indices in range, no repeated vertex in a triangle
///  - each undirected edge shared by exactly two triangles, traversed once in
///    each direction (consistent winding)
///  - positive signed volume (outward normals)
///  - closure identity: |sum(nu * area)| <= 1e-10 * total area
/// Throws Error(InvalidMesh) naming the first violated condition.
void validate_closed_surface(const SurfaceMesh& mesh);

/// Generalized winding number of a closed mesh around `point` (1 inside,
/// 0 outside), via the Van Oosterom-Strackee solid angle formula.
double winding_number(const SurfaceMesh& mesh, const Vec3& point);

// Geodesic sphere: icosahedron refined `subdivisions` times, 20 * 4^s panels,
// vertices projected onto the sphere.
SurfaceMesh make_icosphere(int subdivisions, double radius = 1.0, const Vec3& center = Vec3::Zero());

// Icosphere stretched by the given semi-axes.
SurfaceMesh make_ellipsoid(int subdivisions, const Vec3& semi_axes);

SurfaceMesh scaled(const SurfaceMesh& mesh, double factor);
SurfaceMesh translated(const SurfaceMesh& mesh, const Vec3& offset);
SurfaceMesh rotated(const SurfaceMesh& mesh, const Mat3& rotation);

// ASCII OFF: "OFF", "nv nf ne", vertex lines, face lines "3 i j k".
// Comment lines starting with '#' are skipped.
SurfaceMesh read_off(std::istream& in);
SurfaceMesh read_off_file(const std::string& path);
void write_off(std::ostream& out, const SurfaceMesh& mesh);

// Largest distance between two vertices.
double vertex_diameter(const SurfaceMesh& mesh);

}  // namespace foldylax
