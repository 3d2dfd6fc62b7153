#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include <Eigen/Dense>

#include "courant/dirac.hpp"
#include "courant/morphisms.hpp"

namespace courant {

// Linear algebra of the truncation: the tangent space to compatible boundary
// triples carries G = sum_i (-1)^i omega^H_1(face i). The pushed-forward
// tangents of algebroid morphisms span S; S should be Lagrangian modulo the
// kernel K of G.

struct LagrangianReport {
  /// max |s^T G t| over an orthonormal basis of S.
  double isotropy_residual = 0.0;
  /// || (I - Z Z^T) Y ||_2 with Y a basis of S^omega and Z a basis of S + K.
  double coisotropy_defect = 0.0;
  int ambient_dim = 0;
  int subspace_dim = 0;
  int kernel_dim = 0;
  int complement_dim = 0;
  /// False when the probe spectrum has no clear gap at sigma_cut.
  bool conclusive = true;
  std::string note;
};

/// Slots (e1, e2) of a discrete differential of nodal data g whose face
/// covectors equal the SBP derivative of g along each face; interior nodes
/// use the lattice gradient.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> face_consistent_differential(const Eigen::MatrixXd& g,
                                                                          int N);

/// Tangents at the constant morphism f = x0, psi = 0: v = q(x0) g + c, mu = dg.
/// n_probe <= 0 picks twice the ambient dimension.
LagrangianReport lagrangian_at_unit(const DiracFrame& frame, const Eigen::VectorXd& x0, int N,
                                    int n_probe, std::uint64_t seed, double sigma_cut = 1e-6);

/// Tangents at the 2-form graph morphism over f, discretized per face in the
/// split form chi = (B Dv + D(B v)) / 2 + E v.
LagrangianReport lagrangian_general_bgraph(const DiracFrame& frame, const SimplexMap& f, int N,
                                           int n_probe, std::uint64_t seed, double sigma_cut = 1e-6);

}  // namespace courant
