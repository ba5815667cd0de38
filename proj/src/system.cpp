#include "foldylax/system.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "foldylax/error.hpp"
#include "foldylax/parallel.hpp"

namespace foldylax {

PlaneWave::PlaneWave(Wavenumber k_, const Vec3& theta_, const Vec3& p_) : k(k_), theta(theta_), p(p_) {
  if (std::abs(theta.norm() - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidWave, "incidence direction theta must be a unit vector");
  }
  if (std::abs(p.dot(theta)) > 1e-12) {
    throw Error(ErrorCode::InvalidWave, "polarization p must be orthogonal to theta");
  }
}

IncidentValues incident_values(const PlaneWave& wave, const Vec3& z) {
  const Complex ik = Complex(0.0, 1.0) * wave.k.value();
  const Complex phase = std::exp(ik * z.dot(wave.theta));
  IncidentValues v;
  v.e = phase * wave.p.cast<Complex>();
  v.curl_e = (ik * phase) * wave.theta.cross(wave.p).cast<Complex>();
  return v;
}

double unit_sphere_single_layer_norm(int max_degree) {
  double best = 0.0;
  for (int n = 0; n <= max_degree; ++n) {
    const double nn = static_cast<double>(n);
    best = std::max(best, std::sqrt(1.0 + nn * (nn + 1.0)) / (2.0 * nn + 1.0));
  }
  return best;
}

InvertibilityConstants invertibility_constants(std::size_t m, double epsilon, double delta, double domain_diameter,
                                               const ClusterSpectra& spectra, Complex k,
                                               double single_layer_norm) {
  InvertibilityConstants c;
  const double ak = std::abs(k);
  const double d13 = std::cbrt(domain_diameter);
  const double d23 = d13 * d13;
  c.c_ls = (1.0 + ak * ak) * 64.0 * ((1.0 + ak / 2.0) * d13 + ak / 2.0 * d23) / (8.0 * kPi) +
           144.0 * single_layer_norm / kPi + std::sqrt(63.0) * ak * ak * d23 / (4.0 * kPi);
  if (m >= 2 && std::isfinite(delta)) {
    const double e3 = epsilon * epsilon * epsilon;
    const double d3 = delta * delta * delta;
    const double md = static_cast<double>(m);
    const double cr = std::cbrt(md);
    c.c_li = 1.0 - c.c_ls * spectra.mu_plus * e3 / d3;
    c.c_li2 = 1.0 - 4.0 * spectra.mu_plus *
                        (std::log(cr) / d3 + 2.0 * ak * cr / (delta * delta) + cr * cr * ak * ak / (2.0 * delta)) * e3;
  }
  c.c_li_positive = c.c_li > 0.0;
  c.c_li2_positive = c.c_li2 > 0.0;
  c.heuristic = k.imag() > 0.0;
  return c;
}

Mat3 FoldySystem::q_block(std::size_t b) const {
  const std::size_t m = size();
  return b < m ? Mat3(-p_tensors[b]) : t_tensors[b - m];
}

FoldySystem assemble(const std::vector<Vec3>& positions, const std::vector<BodyTensors>& tensors,
                     const PlaneWave& wave, double epsilon, double delta, double domain_diameter) {
  const std::size_t m = positions.size();
  if (m == 0) throw Error(ErrorCode::EmptyCluster, "cannot assemble a system without bodies");
  if (tensors.size() != m) {
    throw Error(ErrorCode::InvalidArgument, "tensor list length " + std::to_string(tensors.size()) +
                                                " does not match body count " + std::to_string(m));
  }
  FoldySystem sys;
  sys.k = wave.k;
  sys.positions = positions;
  sys.epsilon = epsilon;
  sys.delta = delta;
  sys.domain_diameter = domain_diameter;
  sys.p_tensors.reserve(m);
  sys.t_tensors.reserve(m);
  for (const auto& t : tensors) {
    sys.p_tensors.push_back(t.p_tensor);
    sys.t_tensors.push_back(t.t_tensor);
  }
  sys.spectra = cluster_spectra(tensors, epsilon);
  sys.constants = invertibility_constants(m, epsilon, delta, domain_diameter, sys.spectra, wave.k.value());

  const auto n = static_cast<Eigen::Index>(6 * m);
  sys.rhs_scaled.resize(n);
  sys.rhs.resize(n);
  for (std::size_t i = 0; i < m; ++i) {
    const IncidentValues inc = incident_values(wave, positions[i]);
    const auto ia = static_cast<Eigen::Index>(3 * i);
    const auto ib = static_cast<Eigen::Index>(3 * (m + i));
    sys.rhs_scaled.segment<3>(ia) = inc.curl_e;
    sys.rhs_scaled.segment<3>(ib) = -inc.e;
    sys.rhs.segment<3>(ia) = -sys.p_tensors[i].cast<Complex>() * inc.curl_e;
    sys.rhs.segment<3>(ib) = -sys.t_tensors[i].cast<Complex>() * inc.e;
  }
  return sys;
}

FoldySystem assemble(const Cluster& cluster, const std::vector<BodyTensors>& tensors, const PlaneWave& wave) {
  return assemble(cluster.centers(), tensors, wave, cluster.epsilon(), cluster.delta(), cluster.domain_diameter());
}

Eigen::VectorXcd apply_scaled_operator(const FoldySystem& sys, const Eigen::VectorXcd& c) {
  const std::size_t m = sys.size();
  if (c.size() != static_cast<Eigen::Index>(6 * m)) {
    throw Error(ErrorCode::InvalidArgument, "vector length does not match system size");
  }
  // Y = Q C = [A | B]
  std::vector<CVec3> ya(m), yb(m);
  for (std::size_t j = 0; j < m; ++j) {
    ya[j] = -sys.p_tensors[j].cast<Complex>() * c.segment<3>(static_cast<Eigen::Index>(3 * j));
    yb[j] = sys.t_tensors[j].cast<Complex>() * c.segment<3>(static_cast<Eigen::Index>(3 * (m + j)));
  }
  const Complex k2 = sys.k.value() * sys.k.value();
  Eigen::VectorXcd out = c;
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      CVec3 acc_a = CVec3::Zero();
      CVec3 acc_b = CVec3::Zero();
      for (std::size_t j = 0; j < m; ++j) {
        if (j == i) continue;
        const KernelValues kv = kernel_values(sys.k, sys.positions[i], sys.positions[j], sys.kernel);
        acc_a += -(kv.pi * ya[j]) + k2 * cross(kv.grad, yb[j]);
        acc_b += -(kv.pi * yb[j]) + cross(kv.grad, ya[j]);
      }
      out.segment<3>(static_cast<Eigen::Index>(3 * i)) += acc_a;
      out.segment<3>(static_cast<Eigen::Index>(3 * (m + i))) += acc_b;
    }
  });
  return out;
}

Eigen::MatrixXcd materialize_scaled_operator(const FoldySystem& sys) {
  const std::size_t m = sys.size();
  const auto n = static_cast<Eigen::Index>(6 * m);
  Eigen::MatrixXcd op = Eigen::MatrixXcd::Identity(n, n);
  const Complex k2 = sys.k.value() * sys.k.value();
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      const KernelValues kv = kernel_values(sys.k, sys.positions[i], sys.positions[j], sys.kernel);
      const CMat3 theta = cross_matrix<Complex>(kv.grad);
      const CMat3 qa = -sys.p_tensors[j].cast<Complex>();
      const CMat3 qb = sys.t_tensors[j].cast<Complex>();
      const auto ai = static_cast<Eigen::Index>(3 * i), aj = static_cast<Eigen::Index>(3 * j);
      const auto bi = static_cast<Eigen::Index>(3 * (m + i)), bj = static_cast<Eigen::Index>(3 * (m + j));
      op.block<3, 3>(ai, aj) = -kv.pi * qa;
      op.block<3, 3>(ai, bj) = k2 * theta * qb;
      op.block<3, 3>(bi, bj) = -kv.pi * qb;
      op.block<3, 3>(bi, aj) = theta * qa;
    }
  }
  return op;
}

Eigen::MatrixXcd materialize_system_matrix(const FoldySystem& sys) {
  const std::size_t m = sys.size();
  const auto n = static_cast<Eigen::Index>(6 * m);
  Eigen::MatrixXcd mat = Eigen::MatrixXcd::Identity(n, n);
  const Complex k2 = sys.k.value() * sys.k.value();
  parallel_for(m, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const CMat3 p = sys.p_tensors[i].cast<Complex>();
      const CMat3 t = sys.t_tensors[i].cast<Complex>();
      const auto ai = static_cast<Eigen::Index>(3 * i);
      const auto bi = static_cast<Eigen::Index>(3 * (m + i));
      for (std::size_t j = 0; j < m; ++j) {
        if (i == j) continue;
        const KernelValues kv = kernel_values(sys.k, sys.positions[i], sys.positions[j], sys.kernel);
        const CMat3 theta = cross_matrix<Complex>(kv.grad);
        const auto aj = static_cast<Eigen::Index>(3 * j);
        const auto bj = static_cast<Eigen::Index>(3 * (m + j));
        mat.block<3, 3>(ai, aj) = p * kv.pi;
        mat.block<3, 3>(ai, bj) = -k2 * (p * theta);
        mat.block<3, 3>(bi, aj) = t * theta;
        mat.block<3, 3>(bi, bj) = -(t * kv.pi);
      }
    }
  });
  return mat;
}

Eigen::VectorXcd scaled_from_coefficients(const FoldySystem& sys, const std::vector<CVec3>& a,
                                          const std::vector<CVec3>& b) {
  const std::size_t m = sys.size();
  Eigen::VectorXcd c(static_cast<Eigen::Index>(6 * m));
  for (std::size_t i = 0; i < m; ++i) {
    c.segment<3>(static_cast<Eigen::Index>(3 * i)) = -(sys.p_tensors[i].inverse().cast<Complex>() * a[i]);
    c.segment<3>(static_cast<Eigen::Index>(3 * (m + i))) = sys.t_tensors[i].inverse().cast<Complex>() * b[i];
  }
  return c;
}

std::string_view to_string(SolveMethod method) {
  return method == SolveMethod::Direct ? "direct" : "neumann";
}

double scaled_residual(const FoldySystem& sys, const std::vector<CVec3>& a, const std::vector<CVec3>& b) {
  const Eigen::VectorXcd c = scaled_from_coefficients(sys, a, b);
  const double rhs_norm = sys.rhs_scaled.norm();
  const double res = (apply_scaled_operator(sys, c) - sys.rhs_scaled).norm();
  return rhs_norm > 0.0 ? res / rhs_norm : res;
}

SolutionBound solution_bound(const FoldySystem& sys, const std::vector<CVec3>& a, const std::vector<CVec3>& b) {
  SolutionBound s;
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sq += a[i].squaredNorm() + b[i].squaredNorm();
  s.coefficient_norm = std::sqrt(sq);
  s.rhs_norm = sys.rhs_scaled.norm();
  s.applicable = sys.constants.c_li > 0.0;
  if (!s.applicable) return s;
  const double e3 = sys.epsilon * sys.epsilon * sys.epsilon;
  s.unscaled_bound = e3 * s.rhs_norm / (sys.constants.c_li * sys.spectra.mu_minus);
  s.corrected_bound = sys.spectra.mu_plus * e3 * s.rhs_norm / sys.constants.c_li;
  s.unscaled_bound_violated = s.coefficient_norm > s.unscaled_bound;
  s.corrected_bound_violated = s.coefficient_norm > s.corrected_bound * (1.0 + 1e-12);
  return s;
}

namespace {

FoldySolution finish(const FoldySystem& sys, FoldySolution sol) {
  sol.residual_norm = scaled_residual(sys, sol.a_coeffs, sol.b_coeffs);
  sol.bound = solution_bound(sys, sol.a_coeffs, sol.b_coeffs);
  if (sol.bound.corrected_bound_violated) {
    std::ostringstream s;
    s << "solution norm " << sol.bound.coefficient_norm << " exceeds the C_Li estimate " << sol.bound.corrected_bound;
    sol.warnings.push_back(s.str());
    warn(s.str());
  }
  return sol;
}

void split_coefficients(const Eigen::VectorXcd& x, std::size_t m, std::vector<CVec3>& a, std::vector<CVec3>& b) {
  a.resize(m);
  b.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    a[i] = x.segment<3>(static_cast<Eigen::Index>(3 * i));
    b[i] = x.segment<3>(static_cast<Eigen::Index>(3 * (m + i)));
  }
}

}  // namespace

FoldySolution solve_direct(const FoldySystem& sys, const DirectOptions& opt) {
  const std::size_t m = sys.size();
  if (m > opt.max_bodies) {
    throw Error(ErrorCode::CapExceeded, "direct solve limited to " + std::to_string(opt.max_bodies) +
                                            " bodies, got " + std::to_string(m));
  }
  const Eigen::MatrixXcd mat = materialize_system_matrix(sys);
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(mat);
  const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
  if (!(pivots.minCoeff() > 1e-14 * pivots.maxCoeff())) {
    throw Error(ErrorCode::SingularSystem, "Foldy-Lax system matrix is numerically singular");
  }
  const Eigen::VectorXcd x = lu.solve(sys.rhs);
  FoldySolution sol;
  split_coefficients(x, m, sol.a_coeffs, sol.b_coeffs);
  sol.method = SolveMethod::Direct;
  sol.iterations = 1;
  return finish(sys, std::move(sol));
}

double neumann_contraction_estimate(const FoldySystem& sys) { return 1.0 - sys.constants.c_li2; }

namespace {

double q_norm(const FoldySystem& sys, const Eigen::VectorXcd& c) {
  double s = 0.0;
  for (std::size_t b = 0; b < 2 * sys.size(); ++b) {
    const CVec3 v = c.segment<3>(static_cast<Eigen::Index>(3 * b));
    s += std::real(v.dot(sys.q_block(b).cast<Complex>() * v));
  }
  return std::sqrt(std::max(s, 0.0));
}

}  // namespace

FoldySolution solve_neumann(const FoldySystem& sys, const NeumannOptions& opt) {
  FoldySolution sol;
  sol.method = SolveMethod::NeumannSeries;
  const double contraction = neumann_contraction_estimate(sys);
  if (contraction >= 1.0) {
    std::ostringstream s;
    s << "Neumann series contraction estimate " << contraction
      << " >= 1 (C_L2i <= 0); convergence is not guaranteed";
    sol.warnings.push_back(s.str());
    warn(s.str());
  }
  Eigen::VectorXcd c = sys.rhs_scaled;
  double previous = std::numeric_limits<double>::infinity();
  int growth = 0;
  for (int it = 1; it <= opt.max_iter; ++it) {
    // C <- E - (Sigma Q + Theta Q) C
    Eigen::VectorXcd next = sys.rhs_scaled - (apply_scaled_operator(sys, c) - c);
    const double step = q_norm(sys, next - c);
    const double size = q_norm(sys, next);
    const double rel = size > 0.0 ? step / size : 0.0;
    c = std::move(next);
    if (!std::isfinite(rel)) {
      throw Error(ErrorCode::Divergence, "Neumann iteration produced non-finite values at iteration " +
                                             std::to_string(it));
    }
    if (rel < opt.tol) {
      sol.iterations = it;
      std::vector<CVec3> a(sys.size()), b(sys.size());
      const std::size_t m = sys.size();
      for (std::size_t i = 0; i < m; ++i) {
        a[i] = -sys.p_tensors[i].cast<Complex>() * c.segment<3>(static_cast<Eigen::Index>(3 * i));
        b[i] = sys.t_tensors[i].cast<Complex>() * c.segment<3>(static_cast<Eigen::Index>(3 * (m + i)));
      }
      sol.a_coeffs = std::move(a);
      sol.b_coeffs = std::move(b);
      return finish(sys, std::move(sol));
    }
    growth = step > previous ? growth + 1 : 0;
    previous = step;
    if (growth >= 3) {
      std::ostringstream s;
      s << "Neumann iteration diverging: increment grew three iterations in a row (iteration " << it
        << ", relative increment " << rel << ", contraction estimate " << contraction << ")";
      throw Error(ErrorCode::Divergence, s.str());
    }
  }
  throw Error(ErrorCode::NoConvergence, "Neumann iteration did not reach tol " + std::to_string(opt.tol) +
                                            " within " + std::to_string(opt.max_iter) + " iterations");
}

FoldySolution solve(const FoldySystem& sys, const SolveOptions& opt) {
  switch (opt.method) {
    case MethodChoice::Direct: return solve_direct(sys, opt.direct);
    case MethodChoice::Neumann: return solve_neumann(sys, opt.neumann);
    case MethodChoice::Auto: break;
  }
  if (sys.size() <= opt.direct.max_bodies) return solve_direct(sys, opt.direct);
  return solve_neumann(sys, opt.neumann);
}

}  // namespace foldylax
