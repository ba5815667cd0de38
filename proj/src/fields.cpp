#include "foldylax/fields.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "foldylax/error.hpp"
#include "foldylax/parallel.hpp"

namespace foldylax {

std::vector<FarFieldSample> far_field(const FoldySolution& solution, const std::vector<Vec3>& positions,
                                      const Wavenumber& k, const std::vector<Vec3>& taus) {
  if (!k.is_real()) {
    throw Error(ErrorCode::ComplexWavenumberFarField, "far-field pattern requires a real wavenumber (Im k = 0)");
  }
  if (solution.a_coeffs.size() != positions.size() || solution.b_coeffs.size() != positions.size()) {
    throw Error(ErrorCode::InvalidArgument, "solution size does not match body count");
  }
  const Complex ik = Complex(0.0, 1.0) * k.value();
  std::vector<FarFieldSample> out(taus.size());
  parallel_for(taus.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      const Vec3& tau = taus[s];
      if (std::abs(tau.norm() - 1.0) > 1e-12) {
        throw Error(ErrorCode::InvalidArgument, "observation direction must be a unit vector");
      }
      const CVec3 tc = tau.cast<Complex>();
      CVec3 sum = CVec3::Zero();
      for (std::size_t i = 0; i < positions.size(); ++i) {
        const Complex phase = std::exp(-ik * tau.dot(positions[i]));
        sum += phase * cross(tc, solution.a_coeffs[i] + ik * cross(tc, solution.b_coeffs[i]));
      }
      out[s] = FarFieldSample{tau, (ik / (4.0 * kPi)) * sum};
    }
  });
  return out;
}

std::vector<FarFieldSample> far_field(const FoldySolution& solution, const Cluster& cluster,
                                      const PlaneWave& wave, const std::vector<Vec3>& taus) {
  return far_field(solution, cluster.centers(), wave.k, taus);
}

std::vector<CVec3> near_field(const FoldySolution& solution, const std::vector<Vec3>& positions,
                              const Wavenumber& k, const std::vector<Vec3>& points, const KernelOptions& kernel) {
  if (solution.a_coeffs.size() != positions.size() || solution.b_coeffs.size() != positions.size()) {
    throw Error(ErrorCode::InvalidArgument, "solution size does not match body count");
  }
  std::vector<CVec3> out(points.size());
  parallel_for(points.size(), [&](std::size_t begin, std::size_t end) {
    for (std::size_t s = begin; s < end; ++s) {
      CVec3 e = CVec3::Zero();
      for (std::size_t i = 0; i < positions.size(); ++i) {
        if ((points[s] - positions[i]).norm() < kernel.coincident_floor) {
          throw Error(ErrorCode::CoincidentWithCenter, "near-field point " + std::to_string(s) +
                                                           " coincides with the center of body " + std::to_string(i));
        }
        const KernelValues kv = kernel_values(k, points[s], positions[i], kernel);
        e += cross(kv.grad, solution.a_coeffs[i]) + kv.pi * solution.b_coeffs[i];
      }
      out[s] = e;
    }
  });
  return out;
}

std::vector<CVec3> near_field(const FoldySolution& solution, const Cluster& cluster, const PlaneWave& wave,
                              const std::vector<Vec3>& points, const NearFieldOptions& opt) {
  if (opt.warn_inside_delta) {
    std::size_t close = 0;
    double worst = std::numeric_limits<double>::infinity();
    const double reference = std::isfinite(cluster.delta()) ? cluster.delta() : 0.0;
    for (const auto& x : points) {
      const double d = cluster.distance_to(x);
      if (d < reference) {
        ++close;
        worst = std::min(worst, d);
      }
    }
    if (close > 0) {
      std::ostringstream s;
      s << close << " near-field point(s) closer than delta = " << reference << " to the cluster (min distance "
        << worst << "); the expansion is only established at distance delta";
      warn(s.str());
    }
  }
  return near_field(solution, cluster.centers(), wave.k, points, opt.kernel);
}

double varepsilon_kdm(double k_abs, double delta, std::size_t m) {
  const double k1 = k_abs + 1.0;
  const double cr = std::cbrt(static_cast<double>(m));
  return k1 * std::log(cr) / (delta * delta * delta) + k1 * k1 * cr / (delta * delta) + k1 * k1 * k1 * cr * cr / delta;
}

double varepsilon_generic(double delta, double s, double kpoly) { return std::max(1.0, kpoly) / std::pow(delta, s); }

ErrorBudget error_budgets(std::size_t m, double epsilon, double delta, double k_abs, const ClusterSpectra& spectra,
                             const InvertibilityConstants& constants) {
  ErrorBudget b;
  const double k = k_abs;
  const double k1 = k + 1.0;
  const double md = static_cast<double>(m);
  const double cr = std::cbrt(md);
  const double e = epsilon;
  const double e3 = e * e * e;
  const double e4 = e3 * e;
  const double e7 = e4 * e3;
  b.single_body = !std::isfinite(delta);
  // delta = +inf: every 1/delta^s term vanishes.
  auto inv = [&](int s) { return b.single_body ? 0.0 : 1.0 / std::pow(delta, s); };

  b.varepsilon_kdm = b.single_body ? 0.0 : varepsilon_kdm(k, delta, m);

  b.group4 = {
      {"eps4_over_delta4", e4 * inv(4), 4, -4, MDependence::Power, 0},
      {"kdm_log", (1.0 + k) * k1 * std::log(cr) * inv(3) * e4, 4, -3, MDependence::LogCubeRoot, 0},
      {"kdm_m13", (1.0 + k) * k1 * k1 * cr * inv(2) * e4, 4, -2, MDependence::Power, 1.0 / 3.0},
      {"kdm_m23", (1.0 + k) * k1 * k1 * k1 * cr * cr * inv(1) * e4, 4, -1, MDependence::Power, 2.0 / 3.0},
      {"eps1", std::max(1.0 + k, k * k) * e, 1, 0, MDependence::Power, 0},
  };
  b.group7 = {
      {"eps7_over_delta7", e7 * inv(7), 7, -7, MDependence::Power, 0},
      {"eps7_over_delta6", std::max(1.0, k + k * k + k * k * k) * e7 * inv(6), 7, -6, MDependence::Power, 0},
      {"eps7_over_delta5", std::max(1.0, k * k) * e7 * inv(5), 7, -5, MDependence::Power, 0},
  };
  for (const auto& t : b.group4) b.group4_sum += t.value;
  for (const auto& t : b.group7) b.group7_sum += t.value;

  b.valid = constants.c_li > 0.0 && constants.c_li2 > 0.0;
  b.near_prefactor7 = 1.0 / (constants.c_li2 * spectra.mu_minus);
  b.near_prefactor4 = b.near_prefactor7 / spectra.mu_plus;
  b.far_prefactor = k / (2.0 * kPi) * std::max(1.0, k) / (constants.c_li * spectra.mu_minus);
  b.near_field_eps4 = b.near_prefactor4 * b.group4_sum;
  b.near_field_eps7 = b.near_prefactor7 * b.group7_sum;
  b.far_field_dipole = {"k3k2_m_eps4", (k * k * k + k * k) * md * e4, 4, 0, MDependence::Power, 1};
  b.far_field_interaction = b.far_prefactor * b.group4_sum * md * e3;
  return b;
}

ErrorBudget error_budgets(const Cluster& cluster, const ClusterSpectra& spectra, Complex k,
                             const InvertibilityConstants& constants) {
  return error_budgets(cluster.size(), cluster.epsilon(), cluster.delta(), std::abs(k), spectra, constants);
}

}  // namespace foldylax
