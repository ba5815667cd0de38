#include "foldylax/layerops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "foldylax/error.hpp"
#include "foldylax/geometry.hpp"
#include "foldylax/parallel.hpp"

namespace foldylax {

LayerOperators assemble_layer_operators(const SurfaceMesh& mesh) {
  validate_closed_surface(mesh);
  LayerOperators ops;
  ops.panels = panel_geometry(mesh);
  const PanelGeometry& g = ops.panels;
  const std::size_t n = g.size();
  const double mean_area = g.total_area() / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (g.areas[i] < 1e-14 * mean_area) {
      throw Error(ErrorCode::DegenerateMesh, "panel " + std::to_string(i) + " has negligible area");
    }
  }

  // K(i, j) = (y_j - x_i).nu_j / (4 pi r^3) * a_j
  Eigen::MatrixXd& k = ops.double_layer;
  k.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  const double inv4pi = 1.0 / (4.0 * kPi);
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      double row_sum = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (i == j) continue;
        const Vec3 d = g.centroids[j] - g.centroids[i];
        const double r2 = d.squaredNorm();
        const double v = inv4pi * d.dot(g.normals[j]) / (r2 * std::sqrt(r2)) * g.areas[j];
        k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        row_sum += v;
      }
      k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = 0.5 - row_sum;
    }
  });

  // K*(i, j) = K(j, i) a_i^{-1} a_j
  Eigen::MatrixXd& ks = ops.adjoint_double_layer;
  ks.resize(k.rows(), k.cols());
  parallel_for(n, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        ks(ii, jj) = k(jj, ii) * g.areas[j] / g.areas[i];
      }
    }
  });
  return ops;
}

Eigen::MatrixXd assemble_adjoint_np(const SurfaceMesh& mesh) {
  return assemble_layer_operators(mesh).adjoint_double_layer;
}

namespace {

Vec3 area_centroid(const PanelGeometry& g) {
  Vec3 c = Vec3::Zero();
  for (std::size_t i = 0; i < g.size(); ++i) c += g.areas[i] * g.centroids[i];
  return c / g.total_area();
}

// Solves (shift I + K*) phi = nu column-wise and returns
// int phi (y - c)^T ds. With shift = -1/2 the operator has the constant-mean
// functional in its left null space, so the solve is done on mean-zero
// densities: the rank-one term u a^T pins a^T phi = 0.
TensorResult shifted_tensor(const LayerOperators& ops, double shift) {
  const PanelGeometry& g = ops.panels;
  const auto n = static_cast<Eigen::Index>(g.size());
  Eigen::VectorXd area(n);
  Eigen::MatrixXd rhs(n, 3);
  for (Eigen::Index i = 0; i < n; ++i) {
    area(i) = g.areas[static_cast<std::size_t>(i)];
    rhs.row(i) = g.normals[static_cast<std::size_t>(i)].transpose();
  }
  const double total = area.sum();
  // Project nu to zero surface mean.
  const Eigen::RowVector3d mean = (area.transpose() * rhs) / total;
  rhs.rowwise() -= mean;

  Eigen::MatrixXd op = ops.adjoint_double_layer;
  op.diagonal().array() += shift;
  if (shift < 0.0) {
    op.noalias() += Eigen::VectorXd::Constant(n, 1.0 / total) * area.transpose();
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(op);
  const Eigen::VectorXd diag = lu.matrixLU().diagonal().cwiseAbs();
  if (!(diag.minCoeff() > 1e-13 * diag.maxCoeff())) {
    throw Error(ErrorCode::SingularOperator, "shifted Neumann-Poincare operator is numerically singular");
  }
  const Eigen::MatrixXd density = lu.solve(rhs);

  const Vec3 c = area_centroid(g);
  Mat3 m = Mat3::Zero();
  for (Eigen::Index i = 0; i < n; ++i) {
    const Vec3 y = g.centroids[static_cast<std::size_t>(i)] - c;
    m += area(i) * density.row(i).transpose() * y.transpose();
  }
  TensorResult out;
  const double norm = m.norm();
  out.asymmetry = norm > 0.0 ? (m - m.transpose()).norm() / norm : 0.0;
  out.tensor = 0.5 * (m + m.transpose());
  return out;
}

}  // namespace

TensorResult polarization_tensor(const LayerOperators& ops) { return shifted_tensor(ops, -0.5); }
TensorResult virtual_mass_tensor(const LayerOperators& ops) { return shifted_tensor(ops, 0.5); }

TensorResult polarization_tensor(const SurfaceMesh& mesh) {
  return polarization_tensor(assemble_layer_operators(mesh));
}

TensorResult virtual_mass_tensor(const SurfaceMesh& mesh) {
  return virtual_mass_tensor(assemble_layer_operators(mesh));
}

BodyTensors bem_body_tensors(const SurfaceMesh& mesh) {
  const LayerOperators ops = assemble_layer_operators(mesh);
  const TensorResult p = polarization_tensor(ops);
  const TensorResult t = virtual_mass_tensor(ops);
  return BodyTensors{p.tensor, t.tensor, p.asymmetry, t.asymmetry};
}

BodyTensors analytic_sphere_tensors(double radius) {
  if (!(radius > 0.0)) throw Error(ErrorCode::InvalidBody, "sphere radius must be positive");
  const double r3 = radius * radius * radius;
  return BodyTensors{-4.0 * kPi * r3 * Mat3::Identity(), 2.0 * kPi * r3 * Mat3::Identity(), 0.0, 0.0};
}

BodyTensors body_tensors(const BodyShape& body) {
  if (body.is_sphere()) return analytic_sphere_tensors(body.sphere_shape().radius);
  return bem_body_tensors(body.mesh_shape().surface);
}

Vec3 symmetric_eigenvalues(const Mat3& m) {
  Eigen::SelfAdjointEigenSolver<Mat3> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

ClusterSpectra cluster_spectra(const std::vector<BodyTensors>& tensors, double scale) {
  if (tensors.empty()) throw Error(ErrorCode::EmptyCluster, "no tensors");
  if (!(scale > 0.0)) throw Error(ErrorCode::InvalidArgument, "normalization scale must be positive");
  const double s3 = scale * scale * scale;
  ClusterSpectra out{0.0, std::numeric_limits<double>::infinity()};
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    const Vec3 et = symmetric_eigenvalues(tensors[i].t_tensor / s3);
    const Vec3 ep = symmetric_eigenvalues(-tensors[i].p_tensor / s3);
    if (!(et(0) > 0.0)) {
      throw Error(ErrorCode::WrongSignTensor, "virtual-mass tensor of body " + std::to_string(i) +
                                                  " is not positive definite");
    }
    if (!(ep(0) > 0.0)) {
      throw Error(ErrorCode::WrongSignTensor, "polarization tensor of body " + std::to_string(i) +
                                                  " is not negative definite");
    }
    out.mu_plus = std::max({out.mu_plus, et(2), ep(2)});
    out.mu_minus = std::min({out.mu_minus, et(0), ep(0)});
  }
  return out;
}

}  // namespace foldylax
