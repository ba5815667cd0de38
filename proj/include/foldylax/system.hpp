#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "foldylax/geometry.hpp"
#include "foldylax/greens.hpp"
#include "foldylax/layerops.hpp"
#include "foldylax/types.hpp"

namespace foldylax {

// E_in(x) = p exp(ik x.theta), |theta| = 1, p.theta = 0 (both within 1e-12).
struct PlaneWave {
  PlaneWave(Wavenumber k, const Vec3& theta, const Vec3& p);

  Wavenumber k;
  Vec3 theta;
  Vec3 p;
};

struct IncidentValues {
  CVec3 e;       // E_in(z)
  CVec3 curl_e;  // ik (theta x p) exp(ik z.theta)
};

IncidentValues incident_values(const PlaneWave& wave, const Vec3& z);

struct InvertibilityConstants {
  double c_ls = 0.0;
  double c_li = 1.0;
  double c_li2 = 1.0;
  bool c_li_positive = true;
  bool c_li2_positive = true;
  bool heuristic = false;  // Im k > 0: evaluated with |k|
};

// Norm of the single layer potential on the unit sphere as a map L^2 -> H^1:
// sup over degrees n <= max_degree of sqrt(1 + n(n+1)) / (2n + 1).
double unit_sphere_single_layer_norm(int max_degree = 1000);

/// C_Ls, C_Li = 1 - C_Ls mu+ eps^3/delta^3 and
/// C_L2i = 1 - 4 mu+ (ln(m^(1/3))/delta^3 + 2|k| m^(1/3)/delta^2 + m^(2/3)|k|^2/(2 delta)) eps^3.
/// delta = +inf (single body) gives C_Li = C_L2i = 1.
InvertibilityConstants invertibility_constants(std::size_t m, double epsilon, double delta, double domain_diameter,
                                               const ClusterSpectra& spectra, Complex k,
                                               double single_layer_norm = 1.0);

// Foldy-Lax system in unknowns [A_1..A_m | B_1..B_m] (6m complex):
//   A_i + P_i sum_{j!=i} (Pi_ij A_j - k^2 grad Phi_ij x B_j) = -P_i curl E_in(z_i)
//   B_i + T_i sum_{j!=i} (grad Phi_ij x A_j - Pi_ij B_j)     = -T_i E_in(z_i)
// The equivalent scaled form C + Sigma Q C + Theta Q C = E uses
// C = Q^{-1} [A | B] with Q = diag(-P_1..-P_m, T_1..T_m) and
// E = [curl E_in(z_i) | -E_in(z_i)].
struct FoldySystem {
  Wavenumber k;
  std::vector<Vec3> positions;
  std::vector<Mat3> p_tensors;
  std::vector<Mat3> t_tensors;
  Eigen::VectorXcd rhs_scaled;  // E
  Eigen::VectorXcd rhs;         // [-P curl E_in | -T E_in]
  double epsilon = 0.0;
  double delta = 0.0;
  double domain_diameter = 0.0;
  ClusterSpectra spectra;
  InvertibilityConstants constants;
  KernelOptions kernel;

  std::size_t size() const { return positions.size(); }
  // Q block for scaled index b in [0, 2m).
  Mat3 q_block(std::size_t b) const;
};

FoldySystem assemble(const Cluster& cluster, const std::vector<BodyTensors>& tensors, const PlaneWave& wave);

// Low-level form; spectra are computed from the tensors normalized by epsilon.
FoldySystem assemble(const std::vector<Vec3>& positions, const std::vector<BodyTensors>& tensors,
                     const PlaneWave& wave, double epsilon, double delta, double domain_diameter);

// (I + Sigma Q + Theta Q) C, matrix-free, O(m^2).
Eigen::VectorXcd apply_scaled_operator(const FoldySystem& sys, const Eigen::VectorXcd& c);

// Dense (I + Sigma Q + Theta Q) and the dense [A|B] system matrix.
Eigen::MatrixXcd materialize_scaled_operator(const FoldySystem& sys);
Eigen::MatrixXcd materialize_system_matrix(const FoldySystem& sys);

Eigen::VectorXcd scaled_from_coefficients(const FoldySystem& sys, const std::vector<CVec3>& a,
                                          const std::vector<CVec3>& b);

enum class SolveMethod { Direct, NeumannSeries };

std::string_view to_string(SolveMethod method);

// Norm estimate diagnostics for C_Li > 0:
//   unscaled_bound   eps^3 ||E|| / (C_Li mu-)        (reported only)
//   corrected_bound  mu+ eps^3 ||E|| / C_Li           (follows from coercivity)
struct SolutionBound {
  bool applicable = false;
  double coefficient_norm = 0.0;
  double rhs_norm = 0.0;
  double unscaled_bound = 0.0;
  double corrected_bound = 0.0;
  bool unscaled_bound_violated = false;
  bool corrected_bound_violated = false;
};

struct FoldySolution {
  std::vector<CVec3> a_coeffs;
  std::vector<CVec3> b_coeffs;
  double residual_norm = 0.0;  // ||(I + Sigma Q + Theta Q) C - E|| / ||E||
  SolveMethod method = SolveMethod::Direct;
  int iterations = 0;
  SolutionBound bound;
  std::vector<std::string> warnings;
};

double scaled_residual(const FoldySystem& sys, const std::vector<CVec3>& a, const std::vector<CVec3>& b);
SolutionBound solution_bound(const FoldySystem& sys, const std::vector<CVec3>& a, const std::vector<CVec3>& b);

struct DirectOptions {
  std::size_t max_bodies = 500;
};

/// Dense LU solve. Throws CapExceeded above max_bodies, SingularSystem on a
/// numerically zero pivot.
FoldySolution solve_direct(const FoldySystem& sys, const DirectOptions& opt = {});

struct NeumannOptions {
  double tol = 1e-12;
  int max_iter = 10000;
};

// 4 mu+ (ln(m^(1/3))/delta^3 + 2|k| m^(1/3)/delta^2 + m^(2/3)|k|^2/(2 delta)) eps^3,
// i.e. 1 - C_L2i; the series is guaranteed to converge when this is < 1.
double neumann_contraction_estimate(const FoldySystem& sys);

/// Fixed-point iteration C <- E - (Sigma Q + Theta Q) C starting from C = E,
/// stopping when the Q-weighted relative increment drops below tol.
/// Warns when the contraction estimate is >= 1. Throws Divergence when the
/// increment grows three iterations in a row (or turns non-finite), and
/// NoConvergence after max_iter.
FoldySolution solve_neumann(const FoldySystem& sys, const NeumannOptions& opt = {});

enum class MethodChoice { Auto, Direct, Neumann };

struct SolveOptions {
  MethodChoice method = MethodChoice::Auto;
  DirectOptions direct;
  NeumannOptions neumann;
};

FoldySolution solve(const FoldySystem& sys, const SolveOptions& opt = {});

}  // namespace foldylax
