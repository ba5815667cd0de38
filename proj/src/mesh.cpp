#include "foldylax/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <utility>

#include "foldylax/error.hpp"
#include "foldylax/parallel.hpp"

namespace foldylax {

double PanelGeometry::total_area() const {
  double s = 0.0;
  for (double a : areas) s += a;
  return s;
}

PanelGeometry panel_geometry(const SurfaceMesh& mesh) {
  PanelGeometry g;
  const std::size_t n = mesh.triangles.size();
  g.centroids.resize(n);
  g.normals.resize(n);
  g.areas.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& t = mesh.triangles[i];
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    const Vec3 cr = (b - a).cross(c - a);
    const double twice_area = cr.norm();
    g.areas[i] = 0.5 * twice_area;
    g.normals[i] = twice_area > 0.0 ? Vec3(cr / twice_area) : Vec3::Zero();
    g.centroids[i] = (a + b + c) / 3.0;
  }
  return g;
}

double signed_volume(const SurfaceMesh& mesh) {
  double v = 0.0;
  for (const auto& t : mesh.triangles) {
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  }
  return v / 6.0;
}

void validate_closed_surface(const SurfaceMesh& mesh) {
  if (mesh.triangles.size() < 4 || mesh.vertices.size() < 4) {
    throw Error(ErrorCode::InvalidMesh, "mesh needs at least 4 vertices and 4 triangles");
  }
  const int nv = static_cast<int>(mesh.vertices.size());
  std::map<std::pair<int, int>, int> directed;
  for (std::size_t f = 0; f < mesh.triangles.size(); ++f) {
    const auto& t = mesh.triangles[f];
    for (int v : t) {
      if (v < 0 || v >= nv) {
        throw Error(ErrorCode::InvalidMesh, "triangle " + std::to_string(f) + " has vertex index out of range");
      }
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) {
      throw Error(ErrorCode::InvalidMesh, "triangle " + std::to_string(f) + " repeats a vertex");
    }
    for (int e = 0; e < 3; ++e) {
      ++directed[{t[e], t[(e + 1) % 3]}];
    }
  }
  for (const auto& [edge, count] : directed) {
    if (count != 1) {
      throw Error(ErrorCode::InvalidMesh, "edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                                              ") traversed " + std::to_string(count) +
                                              " times in the same direction (inconsistent winding or non-manifold)");
    }
    if (directed.find({edge.second, edge.first}) == directed.end()) {
      throw Error(ErrorCode::InvalidMesh, "edge (" + std::to_string(edge.first) + "," + std::to_string(edge.second) +
                                              ") is a boundary edge; surface is not closed");
    }
  }
  if (!(signed_volume(mesh) > 0.0)) {
    throw Error(ErrorCode::InvalidMesh, "signed volume is not positive; normals must point outward");
  }
  const PanelGeometry g = panel_geometry(mesh);
  Vec3 closure = Vec3::Zero();
  for (std::size_t i = 0; i < g.size(); ++i) closure += g.normals[i] * g.areas[i];
  if (closure.norm() > 1e-10 * g.total_area()) {
    throw Error(ErrorCode::InvalidMesh, "closure identity violated: |sum(nu dA)| / area = " +
                                            std::to_string(closure.norm() / g.total_area()));
  }
}

double winding_number(const SurfaceMesh& mesh, const Vec3& point) {
  double omega = 0.0;
  for (const auto& t : mesh.triangles) {
    const Vec3 a = mesh.vertices[t[0]] - point;
    const Vec3 b = mesh.vertices[t[1]] - point;
    const Vec3 c = mesh.vertices[t[2]] - point;
    const double la = a.norm(), lb = b.norm(), lc = c.norm();
    const double num = a.dot(b.cross(c));
    const double den = la * lb * lc + a.dot(b) * lc + b.dot(c) * la + c.dot(a) * lb;
    omega += 2.0 * std::atan2(num, den);
  }
  return omega / (4.0 * kPi);
}

SurfaceMesh make_icosphere(int subdivisions, double radius, const Vec3& center) {
  const double t = (1.0 + std::sqrt(5.0)) / 2.0;
  std::vector<Vec3> v = {
      {-1, t, 0}, {1, t, 0}, {-1, -t, 0}, {1, -t, 0}, {0, -1, t}, {0, 1, t},
      {0, -1, -t}, {0, 1, -t}, {t, 0, -1}, {t, 0, 1}, {-t, 0, -1}, {-t, 0, 1}};
  for (auto& p : v) p.normalize();
  std::vector<std::array<int, 3>> f = {
      {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
      {11, 10, 2}, {10, 7, 6}, {7, 1, 8}, {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8},
      {3, 8, 9}, {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1}};
  for (int s = 0; s < subdivisions; ++s) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const std::pair<int, int> key{std::min(a, b), std::max(a, b)};
      auto it = midpoint.find(key);
      if (it != midpoint.end()) return it->second;
      v.push_back((v[a] + v[b]).normalized());
      const int id = static_cast<int>(v.size()) - 1;
      midpoint.emplace(key, id);
      return id;
    };
    std::vector<std::array<int, 3>> next;
    next.reserve(f.size() * 4);
    for (const auto& tri : f) {
      const int ab = mid(tri[0], tri[1]);
      const int bc = mid(tri[1], tri[2]);
      const int ca = mid(tri[2], tri[0]);
      next.push_back({tri[0], ab, ca});
      next.push_back({tri[1], bc, ab});
      next.push_back({tri[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    f = std::move(next);
  }
  for (auto& p : v) p = center + radius * p;
  return SurfaceMesh{std::move(v), std::move(f)};
}

SurfaceMesh make_ellipsoid(int subdivisions, const Vec3& semi_axes) {
  SurfaceMesh m = make_icosphere(subdivisions);
  for (auto& p : m.vertices) p = p.cwiseProduct(semi_axes);
  return m;
}

SurfaceMesh scaled(const SurfaceMesh& mesh, double factor) {
  SurfaceMesh out = mesh;
  for (auto& p : out.vertices) p *= factor;
  return out;
}

SurfaceMesh translated(const SurfaceMesh& mesh, const Vec3& offset) {
  SurfaceMesh out = mesh;
  for (auto& p : out.vertices) p += offset;
  return out;
}

SurfaceMesh rotated(const SurfaceMesh& mesh, const Mat3& rotation) {
  SurfaceMesh out = mesh;
  for (auto& p : out.vertices) p = rotation * p;
  return out;
}

namespace {

bool next_content_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    return true;
  }
  return false;
}

}  // namespace

SurfaceMesh read_off(std::istream& in) {
  std::string line;
  if (!next_content_line(in, line)) throw Error(ErrorCode::InvalidMesh, "OFF: empty input");
  std::istringstream header(line);
  std::string magic;
  header >> magic;
  if (magic != "OFF") throw Error(ErrorCode::InvalidMesh, "OFF: missing 'OFF' header");
  long nv = -1, nf = -1, ne = 0;
  // Counts may share the header line.
  if (!(header >> nv >> nf)) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::InvalidMesh, "OFF: missing counts line");
    std::istringstream counts(line);
    if (!(counts >> nv >> nf)) throw Error(ErrorCode::InvalidMesh, "OFF: malformed counts line");
    counts >> ne;
  }
  if (nv <= 0 || nf <= 0) throw Error(ErrorCode::InvalidMesh, "OFF: vertex and face counts must be positive");
  SurfaceMesh mesh;
  mesh.vertices.reserve(static_cast<std::size_t>(nv));
  for (long i = 0; i < nv; ++i) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::InvalidMesh, "OFF: truncated vertex list");
    std::istringstream s(line);
    double x, y, z;
    if (!(s >> x >> y >> z)) throw Error(ErrorCode::InvalidMesh, "OFF: malformed vertex line " + std::to_string(i));
    mesh.vertices.emplace_back(x, y, z);
  }
  mesh.triangles.reserve(static_cast<std::size_t>(nf));
  for (long i = 0; i < nf; ++i) {
    if (!next_content_line(in, line)) throw Error(ErrorCode::InvalidMesh, "OFF: truncated face list");
    std::istringstream s(line);
    int count, a, b, c;
    if (!(s >> count >> a >> b >> c)) throw Error(ErrorCode::InvalidMesh, "OFF: malformed face line " + std::to_string(i));
    if (count != 3) throw Error(ErrorCode::InvalidMesh, "OFF: face " + std::to_string(i) + " is not a triangle");
    mesh.triangles.push_back({a, b, c});
  }
  return mesh;
}

SurfaceMesh read_off_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileIO, "cannot open mesh file '" + path + "'");
  try {
    return read_off(in);
  } catch (const Error& e) {
    throw Error(e.code(), path + ": " + e.what());
  }
}

void write_off(std::ostream& out, const SurfaceMesh& mesh) {
  out << "OFF\n" << mesh.vertices.size() << ' ' << mesh.triangles.size() << " 0\n";
  char buf[128];
  for (const auto& p : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", p.x(), p.y(), p.z());
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
}

double vertex_diameter(const SurfaceMesh& mesh) {
  const std::size_t n = mesh.vertices.size();
  std::vector<double> row_max(n, 0.0);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double best = 0.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        best = std::max(best, (mesh.vertices[i] - mesh.vertices[j]).squaredNorm());
      }
      row_max[i] = best;
    }
  });
  return std::sqrt(*std::max_element(row_max.begin(), row_max.end()));
}

}  // namespace foldylax
