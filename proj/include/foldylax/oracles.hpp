#pragma once

#include <vector>

#include "foldylax/mesh.hpp"
#include "foldylax/types.hpp"

// Reference computations that do not depend on the modules they check.
namespace foldylax::oracles {

enum class MieMode {
  Dipole,      // exact n = 1 Riccati-Bessel closed forms, ka <= 0.2
  FullSeries,  // all orders up to the Wiscombe cutoff
};

struct MieReference {
  double ka = 0.0;
  Complex a1;           // electric-type coefficient
  Complex b1;           // magnetic-type coefficient
  CVec3 forward_amp;    // E_inf(theta)
  CVec3 back_amp;       // E_inf(-theta)
};

/// Far-field amplitudes of a perfectly conducting sphere (radius a, real k)
/// centered at the origin for the incident field p exp(ik x.theta), using
/// (the amplitudes do not depend on theta beyond fixing the two directions)
/// E_inf = S / (-ik) with the Bohren-Huffman amplitude functions.
/// Throws SizeParameterTooLarge for ka > 0.2 in Dipole mode.
MieReference mie_pec(double radius, double k, const Vec3& theta, const Vec3& p, MieMode mode = MieMode::Dipole);

struct BruteForceSolution {
  std::vector<CVec3> a;
  std::vector<CVec3> b;
};

/// Re-assembles the Foldy-Lax equations entry by entry from closed-form
/// kernels and solves them with naive Gaussian elimination. m <= 3.
BruteForceSolution brute_force_small_system(const std::vector<Vec3>& centers, const std::vector<Mat3>& p_tensors,
                                            const std::vector<Mat3>& t_tensors, Complex k, const Vec3& theta,
                                            const Vec3& p);

struct SpectrumReport {
  double degree1_observed = 0.0;
  double degree1_expected = 1.0 / 6.0;
  double degree1_rel_error = 0.0;
  double degree2_observed = 0.0;
  double degree2_expected = 1.0 / 10.0;
  double degree2_rel_error = 0.0;
  double constant_deviation = 0.0;  // max |K[1] - 1/2|
};

/// Rayleigh quotients of the discrete K* on sampled degree-1 (x) and degree-2
/// (xy) harmonics of a unit-sphere mesh against the known spectrum
/// 1/(2(2n+1)), plus the exactness of K[1] = 1/2.
SpectrumReport np_sphere_spectrum_check(const SurfaceMesh& unit_sphere);

}  // namespace foldylax::oracles
