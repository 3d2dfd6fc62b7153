#pragma once

#include <array>

#include <Eigen/Dense>

#include "courant/quadrature.hpp"

namespace courant {

/// Nodal data over t_k = k/N: one row per node. `point` holds base points
/// (or their variations), `covector` the value of the bundle map on d/dt.
struct PathLattice {
  Eigen::MatrixXd point;
  Eigen::MatrixXd covector;

  int N() const { return static_cast<int>(point.rows()) - 1; }
  int dim() const { return static_cast<int>(point.cols()); }
  /// Throws shape_mismatch / invalid_argument on malformed data.
  void validate() const;
};

/// Nodal data over the triangle lattice (see lattice_index). `slot1`, `slot2`
/// are covector values on e1 = d/ds1 and e2 = d/ds2.
struct TriangleLattice {
  int N = 0;
  Eigen::MatrixXd point;
  Eigen::MatrixXd slot1;
  Eigen::MatrixXd slot2;

  int dim() const { return static_cast<int>(point.cols()); }
  void validate() const;
};

/// An element of C1: base points x and covectors xi.
struct DiscretePath : PathLattice {
  static DiscretePath zeros(int N, int dim);
  Eigen::MatrixXd& x() { return point; }
  const Eigen::MatrixXd& x() const { return point; }
  Eigen::MatrixXd& xi() { return covector; }
  const Eigen::MatrixXd& xi() const { return covector; }
};

/// A tangent vector to C1 at some path: base variation v, covector variation chi.
struct TangentPath : PathLattice {
  static TangentPath zeros(int N, int dim);
  Eigen::MatrixXd& v() { return point; }
  const Eigen::MatrixXd& v() const { return point; }
  Eigen::MatrixXd& chi() { return covector; }
  const Eigen::MatrixXd& chi() const { return covector; }
};

struct DiscreteTriangle : TriangleLattice {
  static DiscreteTriangle zeros(int N, int dim);
};

struct TangentTriangle : TriangleLattice {
  static TangentTriangle zeros(int N, int dim);
};

/// Lattice index of node k of face i (faces: 0 = v1->v2, 1 = v0->v2, 2 = v0->v1).
int face_node(int N, int face, int k);

/// i-th face: restriction to the edge, covector evaluated on the edge direction
/// (e2 - e1, e2, e1 for faces 0, 1, 2).
DiscretePath face(const DiscreteTriangle& tri, int i);
TangentPath face(const TangentTriangle& tri, int i);

/// Endpoint maps on C1: d0 psi = psi(1), d1 psi = psi(0).
Eigen::VectorXd path_face(const PathLattice& path, int i);

/// Degeneracies C1 -> C2 pulled back along the collapse maps
/// (s0: t = s2, s1: t = s1 + s2).
DiscreteTriangle degeneracy(const DiscretePath& path, int j);
TangentTriangle degeneracy(const TangentPath& path, int j);
/// C0 -> C1: constant path with zero covector.
DiscretePath degeneracy_point(const Eigen::VectorXd& x, int N);

/// Three paths (faces 0, 1, 2 of a would-be triangle) with matching corners.
template <class Path>
struct BoundaryTriple {
  std::array<Path, 3> faces;

  /// Checks d0 psi2 = d1 psi0, d0 psi1 = d0 psi0, d1 psi1 = d1 psi2 on base
  /// points, exactly. Throws precondition otherwise.
  void validate() const;
};
using TriangleBoundaryTriple = BoundaryTriple<DiscretePath>;
using TangentBoundaryTriple = BoundaryTriple<TangentPath>;

TriangleBoundaryTriple boundary_triple(const DiscreteTriangle& tri);
/// Face pushes of a tangent: the tangent model of the 2-truncation used by the
/// Lagrangian tests.
TangentBoundaryTriple truncation_tangent_model(const TangentTriangle& tangent);

/// A point of the 2-truncation: a base-map representative plus a compatible triple whose
/// base paths are the edge restrictions of the representative.
struct TruncatedTriangle {
  int N = 0;
  Eigen::MatrixXd f;
  TriangleBoundaryTriple boundary;

  TruncatedTriangle(int N, Eigen::MatrixXd f, TriangleBoundaryTriple boundary);
};

/// Fills the horn missing face `ell` with the alternating-sum formula and
/// identity transport. `given` holds the two other faces in increasing face
/// order; `f` is the base lattice of the result.
DiscreteTriangle horn_fill(const std::array<DiscretePath, 2>& given, int ell,
                           const Eigen::MatrixXd& f);

}  // namespace courant
