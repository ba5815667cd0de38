#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "foldylax/error.hpp"
#include "foldylax/greens.hpp"
#include "test_support.hpp"

using namespace foldylax;
using testing_support::random_vec;

namespace {

const Complex I(0.0, 1.0);

CVec3 fd_grad(const Wavenumber& k, const Vec3& x, const Vec3& y, double h) {
  CVec3 g;
  for (int c = 0; c < 3; ++c) {
    Vec3 e = Vec3::Zero();
    e[c] = h;
    g[c] = (phi(k, x + e, y) - phi(k, x - e, y)) / (2.0 * h);
  }
  return g;
}

// Second differences of phi, no use of grad_phi.
CMat3 fd_hessian(const Wavenumber& k, const Vec3& x, const Vec3& y, double h) {
  CMat3 H;
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) {
      Vec3 ea = Vec3::Zero(), eb = Vec3::Zero();
      ea[a] = h;
      eb[b] = h;
      H(a, b) = (phi(k, x + ea + eb, y) - phi(k, x + ea - eb, y) - phi(k, x - ea + eb, y) + phi(k, x - ea - eb, y)) /
                (4.0 * h * h);
    }
  }
  return H;
}

}  // namespace

TEST_CASE("phi closed-form values") {
  CHECK(std::abs(phi(0.0, Vec3(1, 0, 0), Vec3::Zero()) - 1.0 / (4 * kPi)) < 1e-16);
  CHECK(std::abs(phi(2 * kPi, Vec3(0, 1, 0), Vec3::Zero()) - 1.0 / (4 * kPi)) < 1e-15);
  const Complex want = std::exp(2.0 * I) / (8 * kPi);
  CHECK(std::abs(phi(1.0, Vec3(2, 0, 0), Vec3::Zero()) - want) < 1e-16);
}

TEST_CASE("coincident points and invalid wavenumbers are rejected") {
  try {
    phi(1.0, Vec3(1, 2, 3), Vec3(1, 2, 3));
    FAIL("coincident points accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::CoincidentPoints);
  }
  KernelOptions opt;
  opt.coincident_floor = 1e-3;
  CHECK_THROWS_AS(grad_phi(1.0, Vec3(0, 0, 5e-4), Vec3::Zero(), opt), Error);
  CHECK_NOTHROW(grad_phi(1.0, Vec3(0, 0, 5e-4), Vec3::Zero()));
  try {
    Wavenumber bad(Complex(1.0, -0.1));
    FAIL("Im k < 0 accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidWave);
  }
}

TEST_CASE("grad_phi") {
  const CVec3 g = grad_phi(0.0, Vec3(1, 0, 0), Vec3::Zero());
  CHECK(std::abs(g[0] + 1.0 / (4 * kPi)) < 1e-16);
  CHECK(std::abs(g[1]) == 0.0);
  const Vec3 x(0.3, -0.1, 2.0), y(0.3, -0.1, 0.0);
  CHECK(testing_support::rel_err(grad_phi(1.0, x, y), fd_grad(1.0, x, y, 1e-5)) < 1e-6);
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Vec3 a = random_vec(rng), b = random_vec(rng) + Vec3(2, 0, 0);
    const Wavenumber k(Complex(1.7, 0.3));
    CHECK((grad_phi(k, a, b) + grad_phi(k, b, a)).norm() == 0.0);
  }
}

TEST_CASE("dyadic_pi static value and identities") {
  const CMat3 p = dyadic_pi(0.0, Vec3(1, 0, 0), Vec3::Zero());
  const CMat3 want = (Eigen::Vector3cd(2, -1, -1) / (4 * kPi)).asDiagonal();
  CHECK((p - want).norm() < 1e-16);
  std::mt19937_64 rng(9);
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = random_vec(rng), y = random_vec(rng) + Vec3(0, 0, 1.5);
    CHECK(std::abs(dyadic_pi(0.0, x, y).trace()) < 1e-12 * dyadic_pi(0.0, x, y).norm());
    const Wavenumber k(Complex(2.0 * (i % 5), 0.1 * (i % 3)));
    const CMat3 a = dyadic_pi(k, x, y), b = dyadic_pi(k, y, x);
    CHECK((a - b).norm() <= 1e-15 * a.norm());
    CHECK((a - a.transpose()).norm() <= 1e-13 * a.norm());
  }
}

TEST_CASE("dyadic_pi matches the finite-difference Hessian of phi") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Vec3 x = random_vec(rng);
    Vec3 y = random_vec(rng);
    if ((x - y).norm() < 0.2) y += Vec3(0.5, 0.0, 0.0);
    const Wavenumber k(Complex(u(rng), 0.3 * u(rng)));
    const double h = 1e-4 * (x - y).norm();
    const CMat3 fd = k.value() * k.value() * phi(k, x, y) * CMat3::Identity() + fd_hessian(k, x, y, h);
    const CMat3 pi = dyadic_pi(k, x, y);
    worst = std::max(worst, (pi - fd).norm() / pi.norm());
  }
  CHECK(worst <= 1e-5);
}

TEST_CASE("kernel_values agrees with the individual evaluators") {
  const Wavenumber k(Complex(1.2, 0.4));
  const Vec3 x(0.1, 0.2, 0.3), y(-1.0, 0.5, 0.0);
  const KernelValues kv = kernel_values(k, x, y);
  CHECK(kv.phi == phi(k, x, y));
  CHECK((kv.grad - grad_phi(k, x, y)).norm() <= 1e-16 * kv.grad.norm());
  CHECK((kv.pi - dyadic_pi(k, x, y)).norm() == 0.0);
}

TEST_CASE("lossy medium: |phi| decays monotonically beyond 1/|k|") {
  const Wavenumber k(Complex(3.0, 0.5));
  double prev = std::abs(phi(k, Vec3(1.0 / k.magnitude(), 0, 0), Vec3::Zero()));
  for (double r = 1.0 / k.magnitude() * 1.5; r < 200.0; r *= 1.5) {
    const double v = std::abs(phi(k, Vec3(r, 0, 0), Vec3::Zero()));
    CHECK(v < prev);
    prev = v;
  }
}
