#pragma once

#include "foldylax/types.hpp"

namespace foldylax {

// Wavenumber with Im k >= 0.
class Wavenumber {
 public:
  Wavenumber() = default;
  Wavenumber(Complex k);  // NOLINT: implicit from complex/real is intended
  Wavenumber(double k) : Wavenumber(Complex(k, 0.0)) {}  // NOLINT

  Complex value() const { return k_; }
  double magnitude() const { return std::abs(k_); }
  bool is_real() const { return k_.imag() == 0.0; }

 private:
  Complex k_{0.0, 0.0};
};

struct KernelOptions {
  double coincident_floor = 1e-14;
};

// Phi_k(x, y) = exp(ik|x-y|) / (4 pi |x-y|)
Complex phi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt = {});

// Gradient in x: Phi (ik - 1/r) (x-y)/r
CVec3 grad_phi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt = {});

// Dyadic Green's function Pi(x,y) = k^2 Phi I + grad_x grad_x Phi (closed-form Hessian).
CMat3 dyadic_pi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt = {});

struct KernelValues {
  Complex phi;
  CVec3 grad;  // grad_x Phi
  CMat3 pi;    // dyadic
};

// All three at once, sharing the exponential.
KernelValues kernel_values(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt = {});

}  // namespace foldylax
