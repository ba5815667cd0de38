#include "foldylax/oracles.hpp"

#include <cmath>
#include <string>

#include "foldylax/error.hpp"
#include "foldylax/layerops.hpp"

namespace foldylax::oracles {

namespace {

// Riccati-Bessel psi_n(x) = x j_n(x), xi_n(x) = x h_n^(1)(x) and derivatives.
struct Riccati {
  Complex psi, dpsi, xi, dxi;
};

Riccati riccati_order1(double x) {
  const double s = std::sin(x), c = std::cos(x);
  const double psi = s / x - c;
  const double dpsi = c / x - s / (x * x) + s;
  const double chi = -c / x - s;              // x y_1(x)
  const double dchi = s / x + c / (x * x) - c;
  return {psi, dpsi, Complex(psi, chi), Complex(dpsi, dchi)};
}

Riccati riccati_order(int n, double x) {
  const auto un = static_cast<unsigned>(n);
  const double jn = std::sph_bessel(un, x), jm = std::sph_bessel(un - 1, x);
  const double yn = std::sph_neumann(un, x), ym = std::sph_neumann(un - 1, x);
  const double psi = x * jn;
  const double dpsi = x * jm - n * jn;
  const double chi = x * yn;
  const double dchi = x * ym - n * yn;
  return {psi, dpsi, Complex(psi, chi), Complex(dpsi, dchi)};
}

}  // namespace

MieReference mie_pec(double radius, double k, const Vec3& /*theta*/, const Vec3& p, MieMode mode) {
  if (!(radius > 0.0) || !(k > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "Mie oracle needs positive radius and real positive k");
  }
  const double x = k * radius;
  if (mode == MieMode::Dipole && x > 0.2) {
    throw Error(ErrorCode::SizeParameterTooLarge, "dipole Mie oracle valid for ka <= 0.2, got " + std::to_string(x));
  }
  const int n_max = mode == MieMode::Dipole ? 1 : static_cast<int>(std::ceil(x + 4.0 * std::cbrt(x) + 2.0));
  MieReference ref;
  ref.ka = x;
  // S(0) = sum (2n+1)/2 (a_n + b_n); S2(pi) = sum (2n+1)/2 (-1)^n (a_n - b_n)
  Complex s_forward = 0.0, s_back = 0.0;
  for (int n = 1; n <= n_max; ++n) {
    const Riccati r = n == 1 ? riccati_order1(x) : riccati_order(n, x);
    const Complex an = r.dpsi / r.dxi;
    const Complex bn = r.psi / r.xi;
    if (n == 1) {
      ref.a1 = an;
      ref.b1 = bn;
    }
    const double w = (2.0 * n + 1.0) / 2.0;
    s_forward += w * (an + bn);
    s_back += w * ((n % 2 == 0) ? 1.0 : -1.0) * (an - bn);
  }
  // E_inf = S / (-ik) along the scattering-plane basis; forward e_theta = p,
  // backward e_theta = -p.
  const Complex to_far = Complex(0.0, 1.0) / k;
  const CVec3 pc = p.cast<Complex>();
  ref.forward_amp = to_far * s_forward * pc;
  ref.back_amp = -to_far * s_back * pc;
  return ref;
}

namespace {

using Cx = std::complex<double>;

Cx green(Cx k, double r) { return std::exp(Cx(0.0, 1.0) * k * r) / (4.0 * kPi * r); }

// d/dx_a Phi(x - y)
Cx green_grad(Cx k, const double d[3], double r, int a) {
  const Cx g = green(k, r);
  return g * (Cx(0.0, 1.0) * k - 1.0 / r) * d[a] / r;
}

// k^2 Phi delta_ab + d^2 Phi / dx_a dx_b, written out from derivatives of
// exp(ikr)/(4 pi r).
Cx green_dyadic(Cx k, const double d[3], double r, int a, int b) {
  const Cx ik = Cx(0.0, 1.0) * k;
  const Cx g = green(k, r);
  const double ua = d[a] / r, ub = d[b] / r;
  const double delta = a == b ? 1.0 : 0.0;
  const Cx term_uu = g * (ik * ik - 3.0 * ik / r + 3.0 / (r * r)) * ua * ub;
  const Cx term_id = g * (ik / r - 1.0 / (r * r)) * delta;
  return k * k * g * delta + term_uu + term_id;
}

}  // namespace

BruteForceSolution brute_force_small_system(const std::vector<Vec3>& centers, const std::vector<Mat3>& p_tensors,
                                            const std::vector<Mat3>& t_tensors, Complex k, const Vec3& theta,
                                            const Vec3& p) {
  const int m = static_cast<int>(centers.size());
  if (m < 1 || m > 3) throw Error(ErrorCode::InvalidArgument, "brute-force oracle handles 1 to 3 bodies");
  const int n = 6 * m;
  std::vector<std::vector<Cx>> mat(n, std::vector<Cx>(n + 1, Cx(0.0)));
  const Cx ik = Cx(0.0, 1.0) * k;
  for (int row = 0; row < n; ++row) mat[row][row] = 1.0;

  // Row index of A_i component c is 3i + c; of B_i component c is 3(m+i) + c.
  for (int i = 0; i < m; ++i) {
    const Cx phase = std::exp(ik * (centers[i].x() * theta.x() + centers[i].y() * theta.y() + centers[i].z() * theta.z()));
    Cx e_in[3], curl_e[3];
    const double txp[3] = {theta.y() * p.z() - theta.z() * p.y(), theta.z() * p.x() - theta.x() * p.z(),
                           theta.x() * p.y() - theta.y() * p.x()};
    for (int c = 0; c < 3; ++c) {
      e_in[c] = p(c) * phase;
      curl_e[c] = ik * txp[c] * phase;
    }
    for (int c = 0; c < 3; ++c) {
      Cx ra = 0.0, rb = 0.0;
      for (int l = 0; l < 3; ++l) {
        ra += -p_tensors[i](c, l) * curl_e[l];
        rb += -t_tensors[i](c, l) * e_in[l];
      }
      mat[3 * i + c][n] = ra;
      mat[3 * (m + i) + c][n] = rb;
    }
    for (int j = 0; j < m; ++j) {
      if (j == i) continue;
      const double d[3] = {centers[i].x() - centers[j].x(), centers[i].y() - centers[j].y(),
                           centers[i].z() - centers[j].z()};
      const double r = std::sqrt(d[0] * d[0] + d[1] * d[1] + d[2] * d[2]);
      Cx pi[3][3], cross[3][3];
      Cx g[3];
      for (int a = 0; a < 3; ++a) g[a] = green_grad(k, d, r, a);
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) pi[a][b] = green_dyadic(k, d, r, a, b);
      // cross[a][b] v_b = (g x v)_a
      cross[0][0] = 0.0;   cross[0][1] = -g[2]; cross[0][2] = g[1];
      cross[1][0] = g[2];  cross[1][1] = 0.0;   cross[1][2] = -g[0];
      cross[2][0] = -g[1]; cross[2][1] = g[0];  cross[2][2] = 0.0;
      for (int c = 0; c < 3; ++c) {
        for (int b = 0; b < 3; ++b) {
          Cx paa = 0.0, pab = 0.0, tba = 0.0, tbb = 0.0;
          for (int l = 0; l < 3; ++l) {
            paa += p_tensors[i](c, l) * pi[l][b];
            pab += -k * k * p_tensors[i](c, l) * cross[l][b];
            tba += t_tensors[i](c, l) * cross[l][b];
            tbb += -t_tensors[i](c, l) * pi[l][b];
          }
          mat[3 * i + c][3 * j + b] += paa;
          mat[3 * i + c][3 * (m + j) + b] += pab;
          mat[3 * (m + i) + c][3 * j + b] += tba;
          mat[3 * (m + i) + c][3 * (m + j) + b] += tbb;
        }
      }
    }
  }

  // Gaussian elimination with partial pivoting on the augmented matrix.
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(mat[r][col]) > std::abs(mat[piv][col])) piv = r;
    if (std::abs(mat[piv][col]) == 0.0) throw Error(ErrorCode::SingularSystem, "brute-force system is singular");
    std::swap(mat[piv], mat[col]);
    for (int r = col + 1; r < n; ++r) {
      const Cx f = mat[r][col] / mat[col][col];
      if (f == Cx(0.0)) continue;
      for (int c = col; c <= n; ++c) mat[r][c] -= f * mat[col][c];
    }
  }
  std::vector<Cx> x(n);
  for (int r = n - 1; r >= 0; --r) {
    Cx s = mat[r][n];
    for (int c = r + 1; c < n; ++c) s -= mat[r][c] * x[c];
    x[r] = s / mat[r][r];
  }
  BruteForceSolution out;
  out.a.resize(m);
  out.b.resize(m);
  for (int i = 0; i < m; ++i) {
    out.a[i] = CVec3(x[3 * i], x[3 * i + 1], x[3 * i + 2]);
    out.b[i] = CVec3(x[3 * (m + i)], x[3 * (m + i) + 1], x[3 * (m + i) + 2]);
  }
  return out;
}

SpectrumReport np_sphere_spectrum_check(const SurfaceMesh& unit_sphere) {
  const LayerOperators ops = assemble_layer_operators(unit_sphere);
  const PanelGeometry& g = ops.panels;
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd w(n), f1(n), f2(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 x = g.centroids[static_cast<std::size_t>(i)].normalized();
    w(i) = g.areas[static_cast<std::size_t>(i)];
    f1(i) = x.x();
    f2(i) = x.x() * x.y();
  }
  auto rayleigh = [&](const Eigen::VectorXd& f) {
    const Eigen::VectorXd kf = ops.adjoint_double_layer * f;
    return (kf.array() * f.array() * w.array()).sum() / (f.array() * f.array() * w.array()).sum();
  };
  SpectrumReport rep;
  rep.degree1_observed = rayleigh(f1);
  rep.degree1_rel_error = std::abs(rep.degree1_observed - rep.degree1_expected) / rep.degree1_expected;
  rep.degree2_observed = rayleigh(f2);
  rep.degree2_rel_error = std::abs(rep.degree2_observed - rep.degree2_expected) / rep.degree2_expected;
  const Eigen::VectorXd k1 = ops.double_layer * Eigen::VectorXd::Ones(n);
  rep.constant_deviation = (k1.array() - 0.5).abs().maxCoeff();
  return rep;
}

}  // namespace foldylax::oracles
