#include "foldylax/greens.hpp"

#include <cmath>
#include <sstream>

#include "foldylax/error.hpp"

namespace foldylax {

Wavenumber::Wavenumber(Complex k) : k_(k) {
  if (!(k.imag() >= 0.0) || !std::isfinite(k.real()) || !std::isfinite(k.imag())) {
    std::ostringstream s;
    s << "wavenumber must be finite with Im k >= 0, got " << k;
    throw Error(ErrorCode::InvalidWave, s.str());
  }
}

namespace {

struct Separation {
  Vec3 unit;
  double r;
};

Separation separation(const Vec3& x, const Vec3& y, const KernelOptions& opt) {
  const Vec3 d = x - y;
  const double r = d.norm();
  if (!(r >= opt.coincident_floor)) {
    std::ostringstream s;
    s << "kernel evaluated at coincident points (|x-y| = " << r << " < floor " << opt.coincident_floor << ")";
    throw Error(ErrorCode::CoincidentPoints, s.str());
  }
  return {d / r, r};
}

Complex phi_at(Complex k, double r) {
  const Complex ik(-k.imag(), k.real());
  return std::exp(ik * r) / (4.0 * kPi * r);
}

}  // namespace

Complex phi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt) {
  return phi_at(k.value(), separation(x, y, opt).r);
}

CVec3 grad_phi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt) {
  const auto [u, r] = separation(x, y, opt);
  const Complex ik = Complex(0.0, 1.0) * k.value();
  const Complex f = phi_at(k.value(), r);
  return (f * (ik - 1.0 / r)) * u.cast<Complex>();
}

CMat3 dyadic_pi(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt) {
  return kernel_values(k, x, y, opt).pi;
}

KernelValues kernel_values(const Wavenumber& k, const Vec3& x, const Vec3& y, const KernelOptions& opt) {
  const auto [u, r] = separation(x, y, opt);
  const Complex kk = k.value();
  const Complex ik = Complex(0.0, 1.0) * kk;
  const Complex f = phi_at(kk, r);
  const Complex a = ik - 1.0 / r;
  const Complex d1 = f * a;                           // f'(r)
  const Complex d2 = f * (a * a + 1.0 / (r * r));     // f''(r)
  // Hessian of a radial function: f'' uu^T + (f'/r)(I - uu^T).
  const Mat3 uu = u * u.transpose();
  const Mat3 id = Mat3::Identity();
  KernelValues out;
  out.phi = f;
  out.grad = d1 * u.cast<Complex>();
  out.pi = (kk * kk * f + d1 / r) * id.cast<Complex>() + (d2 - d1 / r) * uu.cast<Complex>();
  return out;
}

}  // namespace foldylax
