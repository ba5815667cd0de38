#pragma once

#include <string>
#include <vector>

#include "foldylax/geometry.hpp"
#include "foldylax/system.hpp"
#include "foldylax/types.hpp"

namespace foldylax {

struct FarFieldSample {
  Vec3 tau;
  CVec3 e_inf;
};

/// E_inf(tau) = ik/(4 pi) sum_i exp(-ik tau.z_i) tau x (A_i + ik tau x B_i),
/// the far-field limit of near_field(). Requires real k
/// (ComplexWavenumberFarField otherwise) and unit tau (InvalidArgument).
std::vector<FarFieldSample> far_field(const FoldySolution& solution, const std::vector<Vec3>& positions,
                                      const Wavenumber& k, const std::vector<Vec3>& taus);
std::vector<FarFieldSample> far_field(const FoldySolution& solution, const Cluster& cluster,
                                      const PlaneWave& wave, const std::vector<Vec3>& taus);

struct NearFieldOptions {
  KernelOptions kernel;
  bool warn_inside_delta = true;
};

/// E_s(x) = sum_i grad Phi_k(x, z_i) x A_i + Pi_k(x, z_i) B_i.
/// Points closer than delta to the cluster trigger a warning; a point on a
/// body center throws CoincidentWithCenter.
std::vector<CVec3> near_field(const FoldySolution& solution, const Cluster& cluster, const PlaneWave& wave,
                              const std::vector<Vec3>& points, const NearFieldOptions& opt = {});

// Geometry-free variant (no distance check).
std::vector<CVec3> near_field(const FoldySolution& solution, const std::vector<Vec3>& positions,
                              const Wavenumber& k, const std::vector<Vec3>& points,
                              const KernelOptions& kernel = {});

// (|k|+1) ln(m^(1/3))/delta^3 + (|k|+1)^2 m^(1/3)/delta^2 + (|k|+1)^3 m^(2/3)/delta
double varepsilon_kdm(double k_abs, double delta, std::size_t m);

// max(1, kpoly) / delta^s
double varepsilon_generic(double delta, double s, double kpoly);

enum class MDependence { Power, LogCubeRoot };

// One monomial of an error budget with O(.) constants set to 1.
struct BudgetTerm {
  std::string name;
  double value = 0.0;
  double eps_power = 0.0;
  double delta_power = 0.0;
  MDependence m_law = MDependence::Power;
  double m_power = 0.0;
};

struct ErrorBudget {
  double varepsilon_kdm = 0.0;
  // O^eps(eps^4/delta^4) and O^eps(eps^7/delta^7) split into monomials.
  std::vector<BudgetTerm> group4;
  std::vector<BudgetTerm> group7;
  double group4_sum = 0.0;
  double group7_sum = 0.0;
  // Prefactors
  double near_prefactor4 = 0.0;  // (C_L2i mu-)^-1 / mu+
  double near_prefactor7 = 0.0;  // (C_L2i mu-)^-1
  double far_prefactor = 0.0;    // |k|/(2 pi) max(1,|k|) / (C_Li mu-)
  // Combined magnitudes
  double near_field_eps4 = 0.0;  // near_prefactor4 * group4_sum
  double near_field_eps7 = 0.0;  // near_prefactor7 * group7_sum
  BudgetTerm far_field_dipole;   // (|k|^3 + |k|^2) m eps^4
  double far_field_interaction = 0.0;  // far_prefactor * group4_sum * m eps^3
  bool valid = true;                   // C_Li > 0 and C_L2i > 0
  bool single_body = false;            // delta = +inf
  std::string label = "unnormalized";
};

ErrorBudget error_budgets(std::size_t m, double epsilon, double delta, double k_abs, const ClusterSpectra& spectra,
                             const InvertibilityConstants& constants);
ErrorBudget error_budgets(const Cluster& cluster, const ClusterSpectra& spectra, Complex k,
                             const InvertibilityConstants& constants);

}  // namespace foldylax
