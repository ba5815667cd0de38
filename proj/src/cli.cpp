#include "foldylax/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include "foldylax/error.hpp"
#include "foldylax/fields.hpp"
#include "foldylax/json_out.hpp"
#include "foldylax/layerops.hpp"
#include "foldylax/oracles.hpp"
#include "foldylax/parallel.hpp"
#include "foldylax/scenario.hpp"
#include "foldylax/system.hpp"
#include "foldylax/validation.hpp"

namespace foldylax::cli {

namespace {

namespace jo = json_out;

bool is_validation_error(ErrorCode c) {
  switch (c) {
    case ErrorCode::ConfigParse:
    case ErrorCode::InvalidArgument:
    case ErrorCode::InvalidWave:
    case ErrorCode::ComplexWavenumberFarField:
    case ErrorCode::EmptyCluster:
    case ErrorCode::OverlappingBodies:
    case ErrorCode::InvalidBody:
    case ErrorCode::InvalidMesh:
    case ErrorCode::DegenerateMesh:
    case ErrorCode::CoincidentPoints:
    case ErrorCode::CoincidentWithCenter:
    case ErrorCode::SizeParameterTooLarge:
    case ErrorCode::CapExceeded:
      return true;
    default:
      return false;
  }
}

// Collects library warnings for the output document while echoing them.
class WarningSink {
 public:
  explicit WarningSink(std::ostream& err) {
    previous_ = set_warning_handler([this, &err](const std::string& msg) {
      messages_.push_back(msg);
      err << "warning: " << msg << '\n';
    });
  }
  ~WarningSink() { set_warning_handler(previous_); }
  WarningSink(const WarningSink&) = delete;
  WarningSink& operator=(const WarningSink&) = delete;

  jo::Value json() const {
    jo::Array a;
    for (const auto& m : messages_) a.emplace_back(m);
    return a;
  }

 private:
  WarningHandler previous_;
  std::vector<std::string> messages_;
};

std::string fmt(double v) { return jo::format_double(v); }

jo::Value metadata(const Request& req, const Scenario* s) {
  jo::Object m{{"schema", 1}, {"command", req.command}};
  std::optional<std::uint64_t> seed = req.seed;
  if (!seed && s) seed = s->seed;
  if (seed) m.emplace_back("seed", static_cast<unsigned long long>(*seed));
  return m;
}

jo::Value regime_json(const RegimeReport& r) {
  return jo::Object{{"frequency_term", r.frequency_term}, {"density_term", r.density_term},
                    {"interaction_term", r.interaction_term}, {"value", r.value},
                    {"threshold", r.threshold}, {"within_threshold", r.within_threshold}};
}

jo::Value constants_json(const InvertibilityConstants& c) {
  return jo::Object{{"c_ls", c.c_ls}, {"c_li", c.c_li}, {"c_li2", c.c_li2}, {"heuristic", c.heuristic}};
}

jo::Value term_json(const BudgetTerm& t) {
  jo::Object o{{"name", t.name}, {"value", t.value}, {"eps_power", t.eps_power}, {"delta_power", t.delta_power}};
  if (t.m_law == MDependence::LogCubeRoot) {
    o.emplace_back("m_law", "ln(m^(1/3))");
  } else {
    o.emplace_back("m_law", "power");
    o.emplace_back("m_power", t.m_power);
  }
  return o;
}

jo::Value coeffs_json(const std::vector<CVec3>& v) {
  jo::Array a;
  for (const auto& c : v) a.push_back(jo::cvec(c));
  return a;
}

struct Prepared {
  Cluster cluster;
  PlaneWave wave;
  std::vector<BodyTensors> tensors;
};

Prepared prepare(const Scenario& s) {
  Cluster cluster = build_cluster(s);
  PlaneWave wave = build_wave(s);
  std::vector<BodyTensors> tensors = build_tensors(s, cluster);
  return {std::move(cluster), std::move(wave), std::move(tensors)};
}

SolveOptions solve_options(const Scenario& s) {
  SolveOptions o;
  o.method = s.solver.method;
  o.direct.max_bodies = s.solver.direct_cap;
  o.neumann.tol = s.solver.tol;
  o.neumann.max_iter = s.solver.max_iter;
  return o;
}

struct Solved {
  FoldySystem system;
  FoldySolution solution;
  RegimeReport regime;
};

Solved solve_scenario(const Scenario& s, const Prepared& p) {
  FoldySystem sys = assemble(p.cluster, p.tensors, p.wave);
  const RegimeReport regime = validate_regime(p.cluster, p.wave.k.value(), sys.spectra.mu_plus, s.regime_threshold);
  if (!regime.within_threshold) {
    std::ostringstream m;
    m << "regime value " << regime.value << " exceeds threshold " << regime.threshold
      << "; the point-interaction approximation may be inaccurate";
    warn(m.str());
  }
  FoldySolution sol = solve(sys, solve_options(s));
  return {std::move(sys), std::move(sol), regime};
}

std::string task_tensor(const Request& req, const Scenario& s, WarningSink& w) {
  const Cluster cluster = build_cluster(s);
  const std::vector<BodyTensors> tensors = build_tensors(s, cluster);
  jo::Array bodies;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const BodyTensors& t = tensors[i];
    bodies.push_back(jo::Object{
        {"index", static_cast<long long>(i)},
        {"p_tensor", jo::mat(t.p_tensor)},
        {"t_tensor", jo::mat(t.t_tensor)},
        {"asymmetry", jo::Object{{"p", t.p_asymmetry}, {"t", t.t_asymmetry}}},
        {"eigenvalues", jo::Object{{"p", jo::vec(symmetric_eigenvalues(t.p_tensor))},
                                   {"t", jo::vec(symmetric_eigenvalues(t.t_tensor))}}},
    });
  }
  return jo::dump(jo::Object{{"metadata", metadata(req, &s)}, {"bodies", bodies}, {"warnings", w.json()}}) + "\n";
}

std::string task_solve(const Request& req, const Scenario& s, WarningSink& w) {
  const Prepared p = prepare(s);
  const Solved r = solve_scenario(s, p);
  const SolutionBound& b = r.solution.bound;
  return jo::dump(jo::Object{
             {"metadata", metadata(req, &s)},
             {"m", static_cast<long long>(p.cluster.size())},
             {"epsilon", p.cluster.epsilon()},
             {"delta", p.cluster.delta()},
             {"domain_diameter", p.cluster.domain_diameter()},
             {"method", std::string(to_string(r.solution.method))},
             {"iterations", r.solution.iterations},
             {"residual", r.solution.residual_norm},
             {"a_coeffs", coeffs_json(r.solution.a_coeffs)},
             {"b_coeffs", coeffs_json(r.solution.b_coeffs)},
             {"constants", constants_json(r.system.constants)},
             {"spectra", jo::Object{{"mu_plus", r.system.spectra.mu_plus}, {"mu_minus", r.system.spectra.mu_minus}}},
             {"regime_report", regime_json(r.regime)},
             {"solution_bound", jo::Object{{"applicable", b.applicable},
                                           {"coefficient_norm", b.coefficient_norm},
                                           {"corrected_bound", b.corrected_bound},
                                           {"unscaled_bound", b.unscaled_bound}}},
             {"warnings", w.json()},
         }) +
         "\n";
}

void require_real_k(const Scenario& s) {
  if (s.wave.k_im != 0.0) {
    throw Error(ErrorCode::ComplexWavenumberFarField,
                "wave.k_im: Im k = 0 required for the far-field pattern; got k_im = " +
                    fmt(s.wave.k_im));
  }
}

std::string task_farfield(const Scenario& s) {
  require_real_k(s);
  std::vector<Vec3> taus = s.task.taus;
  if (s.task.tau_grid) {
    const auto g = direction_grid(*s.task.tau_grid);
    taus.insert(taus.end(), g.begin(), g.end());
  }
  if (taus.empty()) taus = {s.wave.theta, -s.wave.theta};
  const Prepared p = prepare(s);
  const Solved r = solve_scenario(s, p);
  const auto samples = far_field(r.solution, p.cluster, p.wave, taus);
  std::string out = "tau_x,tau_y,tau_z,re_e1,im_e1,re_e2,im_e2,re_e3,im_e3,abs_e_sq\n";
  for (const auto& f : samples) {
    out += fmt(f.tau.x()) + "," + fmt(f.tau.y()) + "," + fmt(f.tau.z());
    for (int c = 0; c < 3; ++c) out += "," + fmt(f.e_inf[c].real()) + "," + fmt(f.e_inf[c].imag());
    out += "," + fmt(f.e_inf.squaredNorm()) + "\n";
  }
  return out;
}

std::string task_nearfield(const Scenario& s) {
  if (s.task.points.empty()) {
    throw Error(ErrorCode::ConfigParse, "task.points: nearfield needs points, a line or a sphere sampling");
  }
  const Prepared p = prepare(s);
  const Solved r = solve_scenario(s, p);
  const auto values = near_field(r.solution, p.cluster, p.wave, s.task.points);
  std::string out = "x,y,z,re_e1,im_e1,re_e2,im_e2,re_e3,im_e3,abs_e_sq\n";
  for (std::size_t i = 0; i < values.size(); ++i) {
    const Vec3& x = s.task.points[i];
    out += fmt(x.x()) + "," + fmt(x.y()) + "," + fmt(x.z());
    for (int c = 0; c < 3; ++c) out += "," + fmt(values[i][c].real()) + "," + fmt(values[i][c].imag());
    out += "," + fmt(values[i].squaredNorm()) + "\n";
  }
  return out;
}

std::string task_budget(const Request& req, const Scenario& s, WarningSink& w) {
  const Cluster cluster = build_cluster(s);
  const PlaneWave wave = build_wave(s);
  const std::vector<BodyTensors> tensors = build_tensors(s, cluster);
  const ClusterSpectra spectra = cluster_spectra(tensors, cluster.epsilon());
  const InvertibilityConstants c = invertibility_constants(cluster.size(), cluster.epsilon(), cluster.delta(),
                                                           cluster.domain_diameter(), spectra, wave.k.value());
  const ErrorBudget b = error_budgets(cluster, spectra, wave.k.value(), c);
  jo::Array g4, g7;
  for (const auto& t : b.group4) g4.push_back(term_json(t));
  for (const auto& t : b.group7) g7.push_back(term_json(t));
  return jo::dump(jo::Object{
             {"metadata", metadata(req, &s)},
             {"label", b.label},
             {"m", static_cast<long long>(cluster.size())},
             {"epsilon", cluster.epsilon()},
             {"delta", cluster.delta()},
             {"k_abs", wave.k.magnitude()},
             {"valid", b.valid},
             {"single_body", b.single_body},
             {"varepsilon_kdm", b.varepsilon_kdm},
             {"constants", constants_json(c)},
             {"spectra", jo::Object{{"mu_plus", spectra.mu_plus}, {"mu_minus", spectra.mu_minus}}},
             {"group4", g4},
             {"group4_sum", b.group4_sum},
             {"group7", g7},
             {"group7_sum", b.group7_sum},
             {"near_prefactor4", b.near_prefactor4},
             {"near_prefactor7", b.near_prefactor7},
             {"far_prefactor", b.far_prefactor},
             {"near_field_eps4", b.near_field_eps4},
             {"near_field_eps7", b.near_field_eps7},
             {"far_field_dipole", term_json(b.far_field_dipole)},
             {"far_field_interaction", b.far_field_interaction},
             {"warnings", w.json()},
         }) +
         "\n";
}

// Checks specific to one scenario.
std::vector<ValidationCheck> scenario_checks(const Scenario& s) {
  std::vector<ValidationCheck> out;
  auto add = [&](std::string name, double observed, double tol) {
    out.push_back({std::move(name), observed, tol, observed <= tol, {}});
  };
  const Prepared p = prepare(s);
  const Solved r = solve_scenario(s, p);
  add("regime_value", r.regime.value, r.regime.threshold);
  add("residual", r.solution.residual_norm, 1e-10);
  double sign = 0.0;
  for (const auto& t : p.tensors) {
    sign = std::max(sign, symmetric_eigenvalues(t.p_tensor).maxCoeff());
    sign = std::max(sign, -symmetric_eigenvalues(t.t_tensor).minCoeff());
  }
  add("tensor_definiteness", sign, 0.0);
  if (p.cluster.size() <= 3) {
    std::vector<Mat3> ps, ts;
    for (const auto& t : p.tensors) {
      ps.push_back(t.p_tensor);
      ts.push_back(t.t_tensor);
    }
    const auto bf = oracles::brute_force_small_system(p.cluster.centers(), ps, ts, p.wave.k.value(), p.wave.theta,
                                                      p.wave.p);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < p.cluster.size(); ++i) {
      num += (r.solution.a_coeffs[i] - bf.a[i]).squaredNorm() + (r.solution.b_coeffs[i] - bf.b[i]).squaredNorm();
      den += bf.a[i].squaredNorm() + bf.b[i].squaredNorm();
    }
    add("brute_force_match", std::sqrt(num / den), 1e-9);
  }
  if (s.wave.k_im == 0.0) {
    const auto taus = direction_grid({7, 8});
    double worst = 0.0;
    for (const auto& f : far_field(r.solution, p.cluster, p.wave, taus)) {
      const double n = f.e_inf.norm();
      if (n > 0.0) worst = std::max(worst, std::abs(f.tau.cast<Complex>().dot(f.e_inf)) / n);
    }
    add("far_field_transversality", worst, 1e-12);
  }
  return out;
}

std::string task_validate(const Request& req, const Scenario* s, WarningSink& w, bool& all_passed) {
  const std::vector<ValidationCheck> checks = s ? scenario_checks(*s) : run_validation_suite();
  jo::Array arr;
  all_passed = true;
  for (const auto& c : checks) {
    all_passed = all_passed && c.passed;
    jo::Object o{{"name", c.name}, {"observed", c.observed}, {"tolerance", c.tolerance}, {"passed", c.passed}};
    if (!c.detail.empty()) o.emplace_back("detail", c.detail);
    arr.push_back(o);
  }
  return jo::dump(jo::Object{{"metadata", metadata(req, s)},
                             {"suite", s ? "scenario" : "builtin"},
                             {"passed", all_passed},
                             {"checks", arr},
                             {"warnings", w.json()}}) +
         "\n";
}

std::string task_gen(const Request& req) {
  const GenRequest& g = req.gen;
  if (!(g.radius > 0.0)) throw Error(ErrorCode::InvalidArgument, "--radius: must be positive");
  jo::Array bodies;
  auto sphere = [&](const Vec3& c) {
    bodies.push_back(jo::Object{{"kind", "sphere"}, {"center", jo::vec(c)}, {"radius", g.radius}});
  };
  if (g.layout == "lattice") {
    if (g.n < 1) throw Error(ErrorCode::InvalidArgument, "--n: must be >= 1");
    if (!(g.spacing > 2.0 * g.radius)) throw Error(ErrorCode::InvalidArgument, "--spacing: must exceed 2 * radius");
    for (int i = 0; i < g.n; ++i)
      for (int j = 0; j < g.n; ++j)
        for (int l = 0; l < g.n; ++l) sphere(g.spacing * Vec3(i, j, l));
  } else if (g.layout == "random") {
    if (g.count < 1) throw Error(ErrorCode::InvalidArgument, "--count: must be >= 1");
    std::mt19937_64 rng(req.seed.value_or(0));
    std::vector<Vec3> centers;
    const double min_dist = 2.0 * g.radius + std::max(g.min_gap, 0.0);
    const long max_attempts = 1000L * g.count + 100000L;
    long attempts = 0;
    while (static_cast<int>(centers.size()) < g.count) {
      if (++attempts > max_attempts) {
        throw Error(ErrorCode::InvalidArgument, "--count: cannot place that many bodies in the box");
      }
      // Draw from the raw generator so the sequence does not depend on the
      // standard library's distribution implementation.
      Vec3 c;
      for (int d = 0; d < 3; ++d) c[d] = g.box * static_cast<double>(rng() >> 11) * 0x1.0p-53;
      bool ok = true;
      for (const auto& o : centers) ok = ok && (c - o).norm() > min_dist;
      if (ok) centers.push_back(c);
    }
    for (const auto& c : centers) sphere(c);
  } else {
    throw Error(ErrorCode::InvalidArgument, "--layout: must be \"lattice\" or \"random\"");
  }
  jo::Object meta{{"generator", g.layout}};
  if (req.seed) meta.emplace_back("seed", static_cast<unsigned long long>(*req.seed));
  return jo::dump(jo::Object{
             {"schema", 1},
             {"metadata", meta},
             {"bodies", bodies},
             {"wave", jo::Object{{"k_re", g.k}, {"k_im", 0.0}, {"theta", jo::vec(Vec3::UnitZ())},
                                 {"p", jo::vec(Vec3::UnitX())}}},
             {"task", jo::Object{{"type", "solve"}}},
         }) +
         "\n";
}

void emit(const Request& req, const std::string& text, std::ostream& out) {
  if (req.out_path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(req.out_path, std::ios::binary);
  if (!f) throw Error(ErrorCode::FileIO, "--out: cannot open '" + req.out_path + "' for writing");
  f << text;
  if (!f) throw Error(ErrorCode::FileIO, "--out: write to '" + req.out_path + "' failed");
}

int dispatch(const Request& req, std::ostream& out, std::ostream& err) {
  static const char* known[] = {"tensor", "solve", "farfield", "nearfield", "budget", "validate", "gen"};
  if (std::find(std::begin(known), std::end(known), req.command) == std::end(known)) {
    throw Error(ErrorCode::InvalidArgument, "unknown subcommand '" + req.command + "'");
  }
  if (req.threads) {
    if (*req.threads < 1) throw Error(ErrorCode::InvalidArgument, "--threads: must be >= 1");
    set_thread_count(*req.threads);
  }
  WarningSink sink(err);
  if (req.command == "gen") {
    emit(req, task_gen(req), out);
    return kSuccess;
  }
  std::optional<Scenario> scenario;
  if (!req.scenario_path.empty()) {
    scenario = load_scenario(req.scenario_path);
    if (!scenario->task.type.empty() && scenario->task.type != req.command) {
      throw Error(ErrorCode::ConfigParse, "task.type: scenario declares '" + scenario->task.type +
                                              "' but the subcommand is '" + req.command + "'");
    }
  } else if (req.command != "validate") {
    throw Error(ErrorCode::InvalidArgument, "--scenario: required for '" + req.command + "'");
  }
  if (req.command == "validate") {
    bool passed = false;
    emit(req, task_validate(req, scenario ? &*scenario : nullptr, sink, passed), out);
    if (!passed) err << "validation: one or more checks failed\n";
    return passed ? kSuccess : kHardError;
  }
  const Scenario& s = *scenario;
  std::string text;
  if (req.command == "tensor") text = task_tensor(req, s, sink);
  else if (req.command == "solve") text = task_solve(req, s, sink);
  else if (req.command == "farfield") text = task_farfield(s);
  else if (req.command == "nearfield") text = task_nearfield(s);
  else text = task_budget(req, s, sink);
  emit(req, text, out);
  return kSuccess;
}

}  // namespace

int run(const Request& request, std::ostream& out, std::ostream& err) {
  try {
    return dispatch(request, out, err);
  } catch (const Error& e) {
    err << "error [" << to_string(e.code()) << "]: " << e.what() << '\n';
    return is_validation_error(e.code()) ? kValidationError : kHardError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kHardError;
  }
}

}  // namespace foldylax::cli
