#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

namespace courant {

/// Nodal rules on [0,1] with N uniform intervals. sbp21 shares the trapezoid
/// norm; sbp42 is the fourth-order interior / second-order boundary
/// summation-by-parts pair.
enum class EdgeRule { trapezoid, sbp21, sbp42 };

/// Highest-order SBP rule the partition supports (sbp42 needs N >= 8).
EdgeRule default_sbp_rule(int N);

std::vector<double> edge_weights(int N, EdgeRule rule);

/// Composite rule over samples at t_k = k/N, N = samples.size() - 1.
double quadrature_edge(std::span<const double> samples, EdgeRule rule = EdgeRule::trapezoid);

/// Dense first-derivative operator D with H D + (H D)^T = diag(-1, 0, ..., 0, 1).
Eigen::MatrixXd sbp_derivative_matrix(int N, EdgeRule rule);
/// D applied column-wise to a (N+1) x m nodal array.
Eigen::MatrixXd sbp_derivative(const Eigen::MatrixXd& nodal, EdgeRule rule);

/// Triangle lattice: nodes (i, j) at s = (i/N, j/N), i + j <= N, stored
/// row by row in j.
inline int lattice_size(int N) { return (N + 1) * (N + 2) / 2; }
inline int lattice_index(int N, int i, int j) { return j * (N + 1) - j * (j - 1) / 2 + i; }

/// Vertex average on each of the N^2 subtriangles times its area.
double quadrature_triangle(std::span<const double> samples, int N);

/// Second-order lattice gradient (d/ds1, d/ds2) of nodal data, one row per
/// node and one column block per component: returns {d1, d2}.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> lattice_gradient(const Eigen::MatrixXd& nodal, int N);

/// Gauss-Legendre nodes and weights mapped to [0,1].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int m);

/// Piecewise Lagrange reconstruction of nodal data on [0,1]: macro segments
/// of p+1 nodes with p the largest of {4,2,1} dividing N, sampled at
/// Gauss-Legendre points of every segment.
class PiecewiseInterpolant {
 public:
  explicit PiecewiseInterpolant(int N, int gauss_points = 12);

  int N() const { return N_; }
  int degree() const { return p_; }
  /// Quadrature weights of the sample points (sum to 1).
  const std::vector<double>& weights() const { return weights_; }
  /// Values at the sample points of nodal data ((N+1) x m).
  Eigen::MatrixXd values(const Eigen::MatrixXd& nodal) const { return value_op_ * nodal; }
  /// d/dt of the reconstruction at the sample points.
  Eigen::MatrixXd derivatives(const Eigen::MatrixXd& nodal) const { return deriv_op_ * nodal; }

 private:
  int N_;
  int p_;
  std::vector<double> weights_;
  Eigen::MatrixXd value_op_;
  Eigen::MatrixXd deriv_op_;
};

}  // namespace courant
