#include "foldylax/validation.hpp"

#include <cmath>
#include <random>

#include "foldylax/fields.hpp"
#include "foldylax/greens.hpp"
#include "foldylax/layerops.hpp"
#include "foldylax/oracles.hpp"
#include "foldylax/system.hpp"

namespace foldylax {

namespace {

ValidationCheck check(std::string name, double observed, double tolerance, std::string detail = {}) {
  return {std::move(name), observed, tolerance, observed <= tolerance, std::move(detail)};
}

double rel(const CVec3& got, const CVec3& want) { return (got - want).norm() / want.norm(); }

Cluster single_sphere() { return Cluster({BodyShape::sphere(Vec3::Zero(), 0.1)}); }

FoldySolution solve_cluster(const Cluster& c, const PlaneWave& w, MethodChoice method) {
  std::vector<BodyTensors> t;
  for (const auto& b : c.bodies()) t.push_back(body_tensors(b));
  SolveOptions opt;
  opt.method = method;
  return solve(assemble(c, t, w), opt);
}

}  // namespace

std::vector<ValidationCheck> run_validation_suite() {
  std::vector<ValidationCheck> out;
  const SurfaceMesh sphere1280 = make_icosphere(3);

  const auto spec = oracles::np_sphere_spectrum_check(sphere1280);
  out.push_back(check("np_spectrum_degree1_1280", spec.degree1_rel_error, 0.03));
  out.push_back(check("np_spectrum_degree2_1280", spec.degree2_rel_error, 0.06));
  out.push_back(check("np_constant_identity", spec.constant_deviation, 1e-12));

  const BodyTensors bem = bem_body_tensors(sphere1280);
  out.push_back(check("sphere_t_tensor_1280", (bem.t_tensor - 2.0 * kPi * Mat3::Identity()).norm() / (2.0 * kPi * std::sqrt(3.0)), 0.02));
  out.push_back(check("sphere_p_tensor_1280", (bem.p_tensor + 4.0 * kPi * Mat3::Identity()).norm() / (4.0 * kPi * std::sqrt(3.0)), 0.02));

  const PlaneWave wave(1.0, Vec3::UnitZ(), Vec3::UnitX());
  {
    const FoldySolution s = solve_cluster(single_sphere(), wave, MethodChoice::Direct);
    const CVec3 a_ref(0.0, Complex(0.0, 4e-3 * kPi), 0.0);
    const CVec3 b_ref(-2e-3 * kPi, 0.0, 0.0);
    out.push_back(check("single_body_closed_form", std::max(rel(s.a_coeffs[0], a_ref), rel(s.b_coeffs[0], b_ref)), 1e-12));

    const auto ff = far_field(s, {Vec3::Zero()}, wave.k, {Vec3::UnitZ(), -Vec3::UnitZ()});
    const auto mie = oracles::mie_pec(0.1, 1.0, Vec3::UnitZ(), Vec3::UnitX());
    const double fwd = std::abs(ff[0].e_inf.norm() - mie.forward_amp.norm()) / mie.forward_amp.norm();
    const double back = std::abs(ff[1].e_inf.norm() - mie.back_amp.norm()) / mie.back_amp.norm();
    out.push_back(check("mie_forward_ka0.1", fwd, 0.015));
    out.push_back(check("mie_back_ka0.1", back, 0.015));

    const Vec3 tau = Vec3(1.0, 2.0, 2.0) / 3.0;
    const double r = 1000.0;
    const CVec3 near = near_field(s, {Vec3::Zero()}, wave.k, {r * tau})[0];
    const CVec3 far = far_field(s, {Vec3::Zero()}, wave.k, {tau})[0].e_inf;
    const CVec3 scaled = near * (r * std::exp(Complex(0.0, -r)));
    out.push_back(check("near_to_far_k|x|=1000", rel(scaled, far), 0.01));
  }

  {
    // 2x2x2 lattice, spacing chosen so that eps/delta = 0.05.
    const double radius = 0.05;
    const double delta = 2.0 * radius / 0.05;
    const double spacing = delta + 2.0 * radius;
    std::vector<BodyShape> bodies;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int l = 0; l < 2; ++l) bodies.push_back(BodyShape::sphere(spacing * Vec3(i, j, l), radius));
    const Cluster c(bodies);
    const PlaneWave w(0.5, Vec3(0.0, 0.6, 0.8), Vec3::UnitX());
    const FoldySolution d = solve_cluster(c, w, MethodChoice::Direct);
    const FoldySolution n = solve_cluster(c, w, MethodChoice::Neumann);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) {
      num += (d.a_coeffs[i] - n.a_coeffs[i]).squaredNorm() + (d.b_coeffs[i] - n.b_coeffs[i]).squaredNorm();
      den += d.a_coeffs[i].squaredNorm() + d.b_coeffs[i].squaredNorm();
    }
    out.push_back(check("neumann_vs_direct_lattice8", std::sqrt(num / den), 1e-9));
  }

  {
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
      const std::size_t m = 1 + trial % 3;
      std::vector<BodyShape> bodies;
      std::vector<Vec3> centers;
      for (std::size_t i = 0; i < m; ++i) {
        const Vec3 c = 2.0 * static_cast<double>(i) * Vec3::UnitX() + 0.5 * Vec3(u(rng), u(rng), u(rng));
        centers.push_back(c);
        bodies.push_back(BodyShape::sphere(c, 0.05 + 0.02 * (u(rng) + 1.0)));
      }
      const Cluster cl(bodies);
      const PlaneWave w(1.5, Vec3::UnitY(), Vec3::UnitZ());
      std::vector<BodyTensors> t;
      std::vector<Mat3> ps, ts;
      for (const auto& b : bodies) {
        t.push_back(body_tensors(b));
        ps.push_back(t.back().p_tensor);
        ts.push_back(t.back().t_tensor);
      }
      const FoldySolution d = solve_direct(assemble(cl, t, w));
      const auto bf = oracles::brute_force_small_system(centers, ps, ts, w.k.value(), w.theta, w.p);
      double num = 0.0, den = 0.0;
      for (std::size_t i = 0; i < m; ++i) {
        num += (d.a_coeffs[i] - bf.a[i]).squaredNorm() + (d.b_coeffs[i] - bf.b[i]).squaredNorm();
        den += bf.a[i].squaredNorm() + bf.b[i].squaredNorm();
      }
      worst = std::max(worst, std::sqrt(num / den));
    }
    out.push_back(check("brute_force_vs_direct", worst, 1e-10));
  }

  {
    // Unit-sphere tensors give mu values that do not enter C_Ls.
    const auto c = invertibility_constants(2, 0.01, 1.0, 1.0, ClusterSpectra{1.0, 1.0}, Complex(0.0, 0.0));
    const double expected = 64.0 / (8.0 * kPi) + 144.0 / kPi;
    out.push_back(check("c_ls_static_unit_domain", std::abs(c.c_ls - expected) / expected, 1e-12));
  }

  {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const Wavenumber k(Complex(1.3, 0.2));
    double worst = 0.0;
    for (int s = 0; s < 20; ++s) {
      const Vec3 x(u(rng), u(rng), u(rng));
      Vec3 y(u(rng), u(rng), u(rng));
      if ((x - y).norm() < 0.3) y += Vec3(1.0, 0.0, 0.0);
      const CMat3 pi = dyadic_pi(k, x, y);
      CMat3 fd;
      const double h = 1e-5;
      for (int c = 0; c < 3; ++c) {
        Vec3 e = Vec3::Zero();
        e[c] = h;
        fd.col(c) = (grad_phi(k, x + e, y) - grad_phi(k, x - e, y)) / (2.0 * h);
      }
      fd += k.value() * k.value() * phi(k, x, y) * CMat3::Identity();
      worst = std::max(worst, (pi - fd).norm() / pi.norm());
    }
    out.push_back(check("dyadic_vs_finite_difference", worst, 1e-5));
  }

  {
    const FoldySolution s = solve_cluster(single_sphere(), wave, MethodChoice::Direct);
    std::vector<Vec3> taus;
    for (int i = 0; i < 100; ++i) {
      const double z = -1.0 + (2.0 * i + 1.0) / 100.0;
      const double ph = 2.399963229728653 * i;
      const double rho = std::sqrt(1.0 - z * z);
      taus.emplace_back(rho * std::cos(ph), rho * std::sin(ph), z);
    }
    double worst = 0.0;
    for (const auto& f : far_field(s, {Vec3(0.3, -0.2, 0.1)}, wave.k, taus)) {
      worst = std::max(worst, std::abs(f.tau.cast<Complex>().dot(f.e_inf)) / f.e_inf.norm());
    }
    out.push_back(check("far_field_transversality", worst, 1e-12));
  }
  return out;
}

}  // namespace foldylax
