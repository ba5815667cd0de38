#include "foldylax/scenario.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "foldylax/error.hpp"
#include "foldylax/layerops.hpp"
#include "foldylax/mesh.hpp"

namespace foldylax {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw Error(ErrorCode::ConfigParse, field + ": " + what);
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) fail(field, "must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(field, "must be finite");
  return v;
}

Vec3 vector3(const json& j, const std::string& field) {
  if (!j.is_array() || j.size() != 3) fail(field, "must be an array of 3 numbers");
  return Vec3(number(j[0], field + "[0]"), number(j[1], field + "[1]"), number(j[2], field + "[2]"));
}

int integer(const json& j, const std::string& field, int min_value) {
  if (!j.is_number_integer()) fail(field, "must be an integer");
  const auto v = j.get<long long>();
  if (v < min_value) fail(field, "must be >= " + std::to_string(min_value));
  return static_cast<int>(v);
}

std::vector<Vec3> vector_list(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "must be an array of 3-vectors");
  std::vector<Vec3> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(vector3(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

DirectionGrid grid(const json& j, const std::string& field) {
  if (!j.is_object()) fail(field, "must be an object");
  DirectionGrid g;
  g.n_theta = integer(j.value("n_theta", json()), field + ".n_theta", 2);
  g.n_phi = integer(j.value("n_phi", json()), field + ".n_phi", 1);
  return g;
}

BodySpec parse_body(const json& j, const std::string& field, const std::filesystem::path& base_dir) {
  if (!j.is_object()) fail(field, "must be an object");
  BodySpec b;
  if (!j.contains("kind") || !j["kind"].is_string()) fail(field + ".kind", "must be \"sphere\" or \"mesh\"");
  b.kind = j["kind"].get<std::string>();
  if (!j.contains("center")) fail(field + ".center", "is required");
  b.center = vector3(j["center"], field + ".center");
  if (b.kind == "sphere") {
    if (!j.contains("radius")) fail(field + ".radius", "is required for a sphere");
    b.radius = number(j["radius"], field + ".radius");
    if (!(b.radius > 0.0)) fail(field + ".radius", "must be positive");
  } else if (b.kind == "mesh") {
    if (!j.contains("mesh_path") || !j["mesh_path"].is_string()) fail(field + ".mesh_path", "must be a string");
    std::filesystem::path p = j["mesh_path"].get<std::string>();
    if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
    b.mesh_path = p.string();
    if (j.contains("scale")) {
      b.scale = number(j["scale"], field + ".scale");
      if (!(b.scale > 0.0)) fail(field + ".scale", "must be positive");
    }
  } else {
    fail(field + ".kind", "unknown body kind \"" + b.kind + "\"");
  }
  return b;
}

}  // namespace

Scenario parse_scenario(const std::string& text, const std::filesystem::path& base_dir) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ConfigParse, std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("scenario", "must be a JSON object");
  Scenario s;
  if (doc.contains("schema")) {
    s.schema = integer(doc["schema"], "schema", 1);
    if (s.schema != 1) fail("schema", "unsupported schema version " + std::to_string(s.schema));
  }
  if (doc.contains("bodies")) {
    if (!doc["bodies"].is_array()) fail("bodies", "must be an array");
    for (std::size_t i = 0; i < doc["bodies"].size(); ++i) {
      s.bodies.push_back(parse_body(doc["bodies"][i], "bodies[" + std::to_string(i) + "]", base_dir));
    }
  }
  if (doc.contains("domain_diameter")) {
    s.domain_diameter = number(doc["domain_diameter"], "domain_diameter");
    if (!(*s.domain_diameter > 0.0)) fail("domain_diameter", "must be positive");
  }
  if (doc.contains("wave")) {
    const json& w = doc["wave"];
    if (!w.is_object()) fail("wave", "must be an object");
    if (w.contains("k_re")) s.wave.k_re = number(w["k_re"], "wave.k_re");
    if (w.contains("k_im")) s.wave.k_im = number(w["k_im"], "wave.k_im");
    if (w.contains("theta")) s.wave.theta = vector3(w["theta"], "wave.theta");
    if (w.contains("p")) s.wave.p = vector3(w["p"], "wave.p");
    if (s.wave.k_im < 0.0) fail("wave.k_im", "must be >= 0");
    if (!(s.wave.theta.norm() > 0.0)) fail("wave.theta", "must be nonzero");
    s.wave.theta.normalize();
    if (std::abs(s.wave.p.dot(s.wave.theta)) > 1e-12 * std::max(1.0, s.wave.p.norm())) {
      fail("wave.p", "polarization must be orthogonal to theta");
    }
  }
  if (doc.contains("task")) {
    const json& t = doc["task"];
    if (t.is_string()) {
      s.task.type = t.get<std::string>();
    } else if (t.is_object()) {
      if (t.contains("type")) {
        if (!t["type"].is_string()) fail("task.type", "must be a string");
        s.task.type = t["type"].get<std::string>();
      }
      if (t.contains("taus")) {
        s.task.taus = vector_list(t["taus"], "task.taus");
        for (std::size_t i = 0; i < s.task.taus.size(); ++i) {
          const double n = s.task.taus[i].norm();
          if (!(n > 0.0)) fail("task.taus[" + std::to_string(i) + "]", "must be nonzero");
          s.task.taus[i] /= n;
        }
      }
      if (t.contains("grid")) s.task.tau_grid = grid(t["grid"], "task.grid");
      if (t.contains("points")) s.task.points = vector_list(t["points"], "task.points");
      if (t.contains("line")) {
        const json& l = t["line"];
        if (!l.is_object()) fail("task.line", "must be an object");
        const Vec3 from = vector3(l.value("from", json()), "task.line.from");
        const Vec3 to = vector3(l.value("to", json()), "task.line.to");
        const int n = integer(l.value("n", json()), "task.line.n", 1);
        for (int i = 0; i < n; ++i) {
          const double t01 = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
          s.task.points.push_back(from + t01 * (to - from));
        }
      }
      if (t.contains("sphere")) {
        const json& sp = t["sphere"];
        if (!sp.is_object()) fail("task.sphere", "must be an object");
        const Vec3 c = vector3(sp.value("center", json()), "task.sphere.center");
        const double r = number(sp.value("radius", json()), "task.sphere.radius");
        if (!(r > 0.0)) fail("task.sphere.radius", "must be positive");
        for (const auto& d : direction_grid(grid(sp, "task.sphere"))) s.task.points.push_back(c + r * d);
      }
    } else {
      fail("task", "must be a string or an object");
    }
    static const char* known[] = {"solve", "tensor", "farfield", "nearfield", "budget", "validate"};
    if (!s.task.type.empty() &&
        std::find(std::begin(known), std::end(known), s.task.type) == std::end(known)) {
      fail("task.type", "unknown task \"" + s.task.type + "\"");
    }
  }
  if (doc.contains("solver")) {
    const json& so = doc["solver"];
    if (!so.is_object()) fail("solver", "must be an object");
    if (so.contains("method")) {
      const std::string m = so["method"].is_string() ? so["method"].get<std::string>() : "";
      if (m == "auto") s.solver.method = MethodChoice::Auto;
      else if (m == "direct") s.solver.method = MethodChoice::Direct;
      else if (m == "neumann") s.solver.method = MethodChoice::Neumann;
      else fail("solver.method", "must be \"auto\", \"direct\" or \"neumann\"");
    }
    if (so.contains("tol")) {
      s.solver.tol = number(so["tol"], "solver.tol");
      if (!(s.solver.tol > 0.0)) fail("solver.tol", "must be positive");
    }
    if (so.contains("max_iter")) s.solver.max_iter = integer(so["max_iter"], "solver.max_iter", 1);
    if (so.contains("direct_cap")) {
      s.solver.direct_cap = static_cast<std::size_t>(integer(so["direct_cap"], "solver.direct_cap", 1));
    }
  }
  if (doc.contains("regime_threshold")) {
    s.regime_threshold = number(doc["regime_threshold"], "regime_threshold");
  }
  if (doc.contains("sphere_tensors")) {
    const std::string v = doc["sphere_tensors"].is_string() ? doc["sphere_tensors"].get<std::string>() : "";
    if (v == "analytic") s.bem_spheres = false;
    else if (v == "bem") s.bem_spheres = true;
    else fail("sphere_tensors", "must be \"analytic\" or \"bem\"");
  }
  if (doc.contains("sphere_subdivisions")) {
    s.sphere_subdivisions = integer(doc["sphere_subdivisions"], "sphere_subdivisions", 0);
    if (s.sphere_subdivisions > 5) fail("sphere_subdivisions", "must be <= 5");
  }
  if (doc.contains("metadata") && doc["metadata"].is_object() && doc["metadata"].contains("seed")) {
    const json& seed = doc["metadata"]["seed"];
    if (!seed.is_number_unsigned()) fail("metadata.seed", "must be a non-negative integer");
    s.seed = seed.get<std::uint64_t>();
  }
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FileIO, "cannot open scenario file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_scenario(buf.str(), std::filesystem::path(path).parent_path());
}

std::vector<Vec3> direction_grid(const DirectionGrid& g) {
  std::vector<Vec3> out;
  for (int i = 0; i < g.n_theta; ++i) {
    const double th = kPi * i / (g.n_theta - 1);
    const bool pole = i == 0 || i == g.n_theta - 1;
    const int nphi = pole ? 1 : g.n_phi;
    for (int j = 0; j < nphi; ++j) {
      const double ph = 2.0 * kPi * j / g.n_phi;
      Vec3 d(std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th));
      if (pole) d = Vec3(0.0, 0.0, i == 0 ? 1.0 : -1.0);
      out.push_back(d.normalized());
    }
  }
  return out;
}

Cluster build_cluster(const Scenario& scenario) {
  if (scenario.bodies.empty()) throw Error(ErrorCode::EmptyCluster, "bodies: scenario defines no bodies");
  std::vector<BodyShape> bodies;
  std::map<std::pair<std::string, double>, SurfaceMesh> meshes;
  for (std::size_t i = 0; i < scenario.bodies.size(); ++i) {
    const BodySpec& b = scenario.bodies[i];
    try {
      if (b.kind == "sphere") {
        bodies.push_back(BodyShape::sphere(b.center, b.radius));
      } else {
        auto key = std::make_pair(b.mesh_path, b.scale);
        auto it = meshes.find(key);
        if (it == meshes.end()) it = meshes.emplace(key, scaled(read_off_file(b.mesh_path), b.scale)).first;
        bodies.push_back(BodyShape::mesh(b.center, it->second));
      }
    } catch (const Error& e) {
      throw Error(e.code(), "bodies[" + std::to_string(i) + "]: " + e.what());
    }
  }
  return Cluster(std::move(bodies), scenario.domain_diameter);
}

PlaneWave build_wave(const Scenario& scenario) {
  return PlaneWave(Wavenumber(Complex(scenario.wave.k_re, scenario.wave.k_im)), scenario.wave.theta,
                   scenario.wave.p);
}

std::vector<BodyTensors> build_tensors(const Scenario& scenario, const Cluster& cluster) {
  std::vector<BodyTensors> out;
  out.reserve(cluster.size());
  // Bodies sharing a mesh file and scale (or a sphere radius) share tensors.
  std::map<std::pair<std::string, double>, BodyTensors> cache;
  for (std::size_t i = 0; i < cluster.size(); ++i) {
    const BodyShape& body = cluster.bodies()[i];
    const BodySpec& spec = scenario.bodies[i];
    std::pair<std::string, double> key =
        body.is_sphere() ? std::make_pair(std::string("#sphere"), body.sphere_shape().radius)
                         : std::make_pair(spec.mesh_path, spec.scale);
    auto it = cache.find(key);
    if (it == cache.end()) {
      BodyTensors t;
      if (body.is_sphere() && scenario.bem_spheres) {
        t = bem_body_tensors(make_icosphere(scenario.sphere_subdivisions, body.sphere_shape().radius));
      } else {
        t = body_tensors(body);
      }
      it = cache.emplace(key, t).first;
    }
    out.push_back(it->second);
  }
  return out;
}

}  // namespace foldylax
