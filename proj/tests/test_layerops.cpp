#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Eigenvalues>

#include "foldylax/error.hpp"
#include "foldylax/geometry.hpp"
#include "foldylax/layerops.hpp"
#include "test_support.hpp"

using namespace foldylax;

namespace {

double rel_to_identity(const Mat3& m, double scale) {
  return (m - scale * Mat3::Identity()).norm() / (std::abs(scale) * std::sqrt(3.0));
}

}  // namespace

TEST_CASE("deflation identity holds to machine precision") {
  for (const SurfaceMesh& m : {make_icosphere(2), make_ellipsoid(2, Vec3(1.0, 0.5, 0.3))}) {
    const LayerOperators ops = assemble_layer_operators(m);
    const Eigen::VectorXd ones = Eigen::VectorXd::Ones(ops.panels.size());
    CHECK((ops.double_layer * ones - 0.5 * ones).cwiseAbs().maxCoeff() < 1e-13);
    // K* is the area-weighted transpose of K.
    const auto& a = ops.panels.areas;
    for (std::size_t i = 0; i < a.size(); i += 37) {
      for (std::size_t j = 0; j < a.size(); j += 41) {
        const double want = ops.double_layer(j, i) * a[j] / a[i];
        CHECK(std::abs(ops.adjoint_double_layer(i, j) - want) <= 1e-14 * (std::abs(want) + 1e-300));
      }
    }
  }
}

TEST_CASE("discrete spectrum lies in [-1/2, 1/2] up to discretization") {
  const Eigen::MatrixXd kstar = assemble_adjoint_np(make_ellipsoid(1, Vec3(1.0, 0.8, 0.6)));
  const Eigen::VectorXcd ev = kstar.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) CHECK(std::abs(ev[i].real()) <= 0.5 * 1.05);
}

TEST_CASE("degenerate panels are rejected") {
  SurfaceMesh m = make_icosphere(1);
  // Collapse one vertex onto a neighbour of the same triangle.
  const auto t = m.triangles[0];
  m.vertices[t[1]] = m.vertices[t[0]];
  try {
    assemble_adjoint_np(m);
    FAIL("degenerate mesh accepted");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::DegenerateMesh || e.code() == ErrorCode::InvalidMesh));
  }
}

TEST_CASE("unit and half-radius sphere tensors at 1280 panels") {
  const BodyTensors unit = bem_body_tensors(make_icosphere(3));
  CHECK(rel_to_identity(unit.p_tensor, -4 * kPi) < 0.02);
  CHECK(rel_to_identity(unit.t_tensor, 2 * kPi) < 0.02);
  CHECK(unit.p_asymmetry < 1e-8);
  CHECK(unit.t_asymmetry < 1e-8);
  const BodyTensors half = bem_body_tensors(make_icosphere(3, 0.5));
  CHECK(rel_to_identity(half.p_tensor, -kPi / 2) < 0.02);
}

TEST_CASE("refinement improves the sphere tensors") {
  double prev_p = 1.0, prev_t = 1.0;
  for (int s = 1; s <= 3; ++s) {
    const BodyTensors t = bem_body_tensors(make_icosphere(s));
    const double ep = rel_to_identity(t.p_tensor, -4 * kPi), et = rel_to_identity(t.t_tensor, 2 * kPi);
    CHECK(ep < prev_p);
    CHECK(et < prev_t);
    prev_p = ep;
    prev_t = et;
  }
}

TEST_CASE("tensor scaling and rotation") {
  const SurfaceMesh m = make_ellipsoid(2, Vec3(1.0, 0.6, 0.4));
  const BodyTensors base = bem_body_tensors(m);
  for (double s : {0.1, 0.37, 3.0}) {
    const BodyTensors sc = bem_body_tensors(scaled(m, s));
    const double s3 = s * s * s;
    CHECK((sc.p_tensor - s3 * base.p_tensor).norm() <= 1e-10 * s3 * base.p_tensor.norm());
    CHECK((sc.t_tensor - s3 * base.t_tensor).norm() <= 1e-10 * s3 * base.t_tensor.norm());
  }
  const Mat3 R = testing_support::rotation(Vec3(1, -2, 0.5), 1.1);
  const BodyTensors rot = bem_body_tensors(rotated(m, R));
  CHECK((R * base.p_tensor * R.transpose() - rot.p_tensor).norm() <= 1e-10 * base.p_tensor.norm());
  CHECK((R * base.t_tensor * R.transpose() - rot.t_tensor).norm() <= 1e-10 * base.t_tensor.norm());
  // Translating the mesh leaves the tensors unchanged.
  const BodyTensors moved = bem_body_tensors(translated(m, Vec3(0.2, -0.1, 0.05)));
  CHECK((moved.p_tensor - base.p_tensor).norm() <= 1e-9 * base.p_tensor.norm());
}

TEST_CASE("ellipsoid tensors are definite and ordered along the axes") {
  const BodyTensors t = bem_body_tensors(make_ellipsoid(3, Vec3(1.0, 0.6, 0.4)));
  const Vec3 ep = symmetric_eigenvalues(t.p_tensor), et = symmetric_eigenvalues(t.t_tensor);
  CHECK(ep.maxCoeff() < 0.0);
  CHECK(et.minCoeff() > 0.0);
  // Polarization is strongest along the long axis.
  CHECK(t.p_tensor(0, 0) < t.p_tensor(1, 1));
  CHECK(t.p_tensor(1, 1) < t.p_tensor(2, 2));
}

TEST_CASE("analytic sphere tensors scale exactly") {
  const BodyTensors one = analytic_sphere_tensors(1.0);
  CHECK(one.p_tensor == -4 * kPi * Mat3::Identity());
  CHECK(one.t_tensor == 2 * kPi * Mat3::Identity());
  const BodyTensors tenth = analytic_sphere_tensors(0.1);
  CHECK((tenth.p_tensor + 4 * kPi * 1e-3 * Mat3::Identity()).norm() <= 1e-14 * tenth.p_tensor.norm());
  CHECK(analytic_sphere_tensors(2.0).t_tensor(1, 1) == doctest::Approx(16 * kPi).epsilon(1e-15));
  CHECK_THROWS_AS(analytic_sphere_tensors(-1.0), Error);
}

TEST_CASE("cluster spectra") {
  const std::vector<BodyTensors> spheres = {analytic_sphere_tensors(0.1), analytic_sphere_tensors(0.1)};
  const ClusterSpectra by_radius = cluster_spectra(spheres, 0.1);
  CHECK(by_radius.mu_plus == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(by_radius.mu_minus == doctest::Approx(2 * kPi).epsilon(1e-14));
  const ClusterSpectra by_diameter = cluster_spectra(spheres, 0.2);
  CHECK(by_diameter.mu_plus == doctest::Approx(kPi / 2).epsilon(1e-14));

  // Mixed radii with a shared scale: extremes over all normalized eigenvalues.
  const std::vector<BodyTensors> mixed = {analytic_sphere_tensors(0.1), analytic_sphere_tensors(0.05)};
  const ClusterSpectra s = cluster_spectra(mixed, 0.1);
  CHECK(s.mu_plus == doctest::Approx(4 * kPi).epsilon(1e-14));
  CHECK(s.mu_minus == doctest::Approx(2 * kPi / 8).epsilon(1e-14));

  BodyTensors bad = analytic_sphere_tensors(1.0);
  bad.t_tensor(2, 2) = -1.0;
  try {
    cluster_spectra({bad}, 1.0);
    FAIL("wrong-sign tensor accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::WrongSignTensor);
  }
}

TEST_CASE("sandwich inequality on random vectors") {
  std::vector<BodyTensors> tensors = {bem_body_tensors(make_ellipsoid(2, Vec3(0.1, 0.06, 0.04))),
                                      bem_body_tensors(make_ellipsoid(2, Vec3(0.05, 0.08, 0.03))),
                                      analytic_sphere_tensors(0.07)};
  const double eps = 0.2;
  const ClusterSpectra s = cluster_spectra(tensors, eps);
  const double e3 = eps * eps * eps;
  std::mt19937_64 rng(17);
  for (int n = 0; n < 1000; ++n) {
    const Vec3 c = testing_support::random_vec(rng, 10.0);
    const double c2 = c.squaredNorm();
    for (const auto& t : tensors) {
      const double tv = c.dot(t.t_tensor * c), pv = -c.dot(t.p_tensor * c);
      CHECK(s.mu_minus * c2 * e3 <= tv * (1 + 1e-12));
      CHECK(tv <= s.mu_plus * c2 * e3 * (1 + 1e-12));
      CHECK(s.mu_minus * c2 * e3 <= pv * (1 + 1e-12));
      CHECK(pv <= s.mu_plus * c2 * e3 * (1 + 1e-12));
    }
  }
}

TEST_CASE("body_tensors dispatches on the body kind") {
  const BodyShape sphere = BodyShape::sphere(Vec3(1, 2, 3), 0.2);
  CHECK(body_tensors(sphere).p_tensor == analytic_sphere_tensors(0.2).p_tensor);
  const SurfaceMesh m = make_ellipsoid(1, Vec3(0.1, 0.05, 0.05));
  const BodyShape mesh_body = BodyShape::mesh(Vec3(1, 2, 3), m);
  CHECK((body_tensors(mesh_body).p_tensor - bem_body_tensors(m).p_tensor).norm() == 0.0);
}
