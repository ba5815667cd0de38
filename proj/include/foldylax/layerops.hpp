#pragma once

#include <vector>

#include <Eigen/Dense>

#include "foldylax/mesh.hpp"
#include "foldylax/types.hpp"

namespace foldylax {

class BodyShape;

// Static (k = 0) double-layer operators on a closed surface, discretized by
// centroid collocation on flat panels.
//
// Sign convention: K*[psi](x) = 1/(4 pi) int (x-y).nu_x / |x-y|^3 psi(y) ds(y),
// so that on the unit sphere K* acts on degree-n surface harmonics with
// eigenvalue 1/(2(2n+1)). Off-diagonal entries are kernel(x_i, y_j) * area_j.
// The diagonal is fixed by K[1] = 1/2, i.e. (-1/2 I + K)[1] = 0 holds to
// rounding; K* is the area-weighted transpose of K.
struct LayerOperators {
  PanelGeometry panels;
  Eigen::MatrixXd double_layer;          // K
  Eigen::MatrixXd adjoint_double_layer;  // K*
};

/// Throws DegenerateMesh if some panel area is below 1e-14 of the mean.
LayerOperators assemble_layer_operators(const SurfaceMesh& mesh);
Eigen::MatrixXd assemble_adjoint_np(const SurfaceMesh& mesh);

struct TensorResult {
  Mat3 tensor;              // symmetrized (M + M^T) / 2
  double asymmetry = 0.0;   // ||M - M^T||_F / ||M||_F before symmetrization
};

// int [-1/2 I + K*]^{-1}(nu)(y) (y - c)^T ds(y), solved on mean-zero densities.
TensorResult polarization_tensor(const SurfaceMesh& mesh);
TensorResult polarization_tensor(const LayerOperators& ops);

// int [1/2 I + K*]^{-1}(nu)(y) (y - c)^T ds(y).
TensorResult virtual_mass_tensor(const SurfaceMesh& mesh);
TensorResult virtual_mass_tensor(const LayerOperators& ops);

struct BodyTensors {
  Mat3 p_tensor;  // negative definite, units length^3
  Mat3 t_tensor;  // positive definite, units length^3
  double p_asymmetry = 0.0;
  double t_asymmetry = 0.0;
};

BodyTensors bem_body_tensors(const SurfaceMesh& mesh);

// Closed form for a sphere: P = -4 pi r^3 I, T = 2 pi r^3 I.
BodyTensors analytic_sphere_tensors(double radius);

// Analytic for spheres, BEM on the body's surface mesh otherwise.
BodyTensors body_tensors(const BodyShape& body);

struct ClusterSpectra {
  double mu_plus = 0.0;
  double mu_minus = 0.0;
};

/// Extreme eigenvalues over the cluster of the normalized tensors
/// T / scale^3 and -P / scale^3. Throws WrongSignTensor if some T is not
/// positive definite or some P is not negative definite.
ClusterSpectra cluster_spectra(const std::vector<BodyTensors>& tensors, double scale);

// Eigenvalues (ascending) of a symmetric 3x3 matrix.
Vec3 symmetric_eigenvalues(const Mat3& m);

}  // namespace foldylax
