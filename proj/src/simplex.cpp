#include "courant/simplex.hpp"

#include <cmath>

#include "courant/error.hpp"

namespace courant {

namespace {

void require_finite(const Eigen::MatrixXd& m, const char* what) {
  require(m.allFinite(), ErrorCode::invalid_argument, std::string(what) + " has non-finite entries");
}

template <class Tri>
Tri make_triangle(int N, int dim) {
  Tri t;
  t.N = N;
  t.point = Eigen::MatrixXd::Zero(lattice_size(N), dim);
  t.slot1 = t.point;
  t.slot2 = t.point;
  return t;
}

template <class Path>
Path make_path(int N, int dim) {
  Path p;
  p.point = Eigen::MatrixXd::Zero(N + 1, dim);
  p.covector = p.point;
  return p;
}

template <class Path, class Tri>
Path face_impl(const Tri& tri, int i) {
  require(i >= 0 && i <= 2, ErrorCode::invalid_argument, "face index must be 0, 1 or 2");
  tri.validate();
  const int N = tri.N;
  Path out = make_path<Path>(N, tri.dim());
  for (int k = 0; k <= N; ++k) {
    const int node = face_node(N, i, k);
    out.point.row(k) = tri.point.row(node);
    if (i == 0) out.covector.row(k) = tri.slot2.row(node) - tri.slot1.row(node);
    else if (i == 1) out.covector.row(k) = tri.slot2.row(node);
    else out.covector.row(k) = tri.slot1.row(node);
  }
  return out;
}

template <class Tri, class Path>
Tri degeneracy_impl(const Path& path, int j) {
  require(j == 0 || j == 1, ErrorCode::invalid_argument, "degeneracy index must be 0 or 1");
  path.validate();
  const int N = path.N();
  Tri out = make_triangle<Tri>(N, path.dim());
  for (int b = 0; b <= N; ++b) {
    for (int a = 0; a + b <= N; ++a) {
      const int node = lattice_index(N, a, b);
      const int t = j == 0 ? b : a + b;
      out.point.row(node) = path.point.row(t);
      if (j == 1) out.slot1.row(node) = path.covector.row(t);
      out.slot2.row(node) = path.covector.row(t);
    }
  }
  return out;
}

}  // namespace

void PathLattice::validate() const {
  require(point.rows() >= 2, ErrorCode::invalid_argument, "a path needs at least 2 nodes");
  require(point.rows() == covector.rows() && point.cols() == covector.cols(),
          ErrorCode::shape_mismatch, "path point and covector arrays differ in shape");
  require_finite(point, "path");
  require_finite(covector, "path");
}

void TriangleLattice::validate() const {
  require(N >= 1, ErrorCode::invalid_argument, "a triangle needs N >= 1");
  const int M = lattice_size(N);
  require(point.rows() == M && slot1.rows() == M && slot2.rows() == M, ErrorCode::shape_mismatch,
          "triangle arrays do not match the lattice");
  require(slot1.cols() == point.cols() && slot2.cols() == point.cols(), ErrorCode::shape_mismatch,
          "triangle slot arrays differ in dimension");
  require_finite(point, "triangle");
  require_finite(slot1, "triangle");
  require_finite(slot2, "triangle");
}

DiscretePath DiscretePath::zeros(int N, int dim) { return make_path<DiscretePath>(N, dim); }
TangentPath TangentPath::zeros(int N, int dim) { return make_path<TangentPath>(N, dim); }
DiscreteTriangle DiscreteTriangle::zeros(int N, int dim) {
  return make_triangle<DiscreteTriangle>(N, dim);
}
TangentTriangle TangentTriangle::zeros(int N, int dim) {
  return make_triangle<TangentTriangle>(N, dim);
}

int face_node(int N, int face, int k) {
  switch (face) {
    case 0: return lattice_index(N, N - k, k);
    case 1: return lattice_index(N, 0, k);
    case 2: return lattice_index(N, k, 0);
    default: fail(ErrorCode::invalid_argument, "face index must be 0, 1 or 2");
  }
}

DiscretePath face(const DiscreteTriangle& tri, int i) { return face_impl<DiscretePath>(tri, i); }
TangentPath face(const TangentTriangle& tri, int i) { return face_impl<TangentPath>(tri, i); }

Eigen::VectorXd path_face(const PathLattice& path, int i) {
  require(i == 0 || i == 1, ErrorCode::invalid_argument, "path face index must be 0 or 1");
  return path.point.row(i == 0 ? path.N() : 0).transpose();
}

DiscreteTriangle degeneracy(const DiscretePath& path, int j) {
  return degeneracy_impl<DiscreteTriangle>(path, j);
}
TangentTriangle degeneracy(const TangentPath& path, int j) {
  return degeneracy_impl<TangentTriangle>(path, j);
}

DiscretePath degeneracy_point(const Eigen::VectorXd& x, int N) {
  DiscretePath p = DiscretePath::zeros(N, static_cast<int>(x.size()));
  p.point.rowwise() = x.transpose();
  return p;
}

template <class Path>
void BoundaryTriple<Path>::validate() const {
  for (const auto& f : faces) f.validate();
  const int N = faces[0].N();
  for (const auto& f : faces)
    require(f.N() == N && f.dim() == faces[0].dim(), ErrorCode::shape_mismatch,
            "triple faces differ in shape");
  auto same = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return a == b; };
  require(same(path_face(faces[2], 0), path_face(faces[0], 1)), ErrorCode::precondition,
          "corner mismatch: d0 psi2 != d1 psi0");
  require(same(path_face(faces[1], 0), path_face(faces[0], 0)), ErrorCode::precondition,
          "corner mismatch: d0 psi1 != d0 psi0");
  require(same(path_face(faces[1], 1), path_face(faces[2], 1)), ErrorCode::precondition,
          "corner mismatch: d1 psi1 != d1 psi2");
}

template struct BoundaryTriple<DiscretePath>;
template struct BoundaryTriple<TangentPath>;

TriangleBoundaryTriple boundary_triple(const DiscreteTriangle& tri) {
  return TriangleBoundaryTriple{{face(tri, 0), face(tri, 1), face(tri, 2)}};
}

TangentBoundaryTriple truncation_tangent_model(const TangentTriangle& tangent) {
  return TangentBoundaryTriple{{face(tangent, 0), face(tangent, 1), face(tangent, 2)}};
}

TruncatedTriangle::TruncatedTriangle(int N_, Eigen::MatrixXd f_, TriangleBoundaryTriple boundary_)
    : N(N_), f(std::move(f_)), boundary(std::move(boundary_)) {
  require(f.rows() == lattice_size(N), ErrorCode::shape_mismatch, "base map does not match the lattice");
  boundary.validate();
  for (int i = 0; i < 3; ++i) {
    require(boundary.faces[i].N() == N && boundary.faces[i].dim() == f.cols(),
            ErrorCode::shape_mismatch, "boundary path shape differs from the base map");
    for (int k = 0; k <= N; ++k)
      require(boundary.faces[i].point.row(k) == f.row(face_node(N, i, k)), ErrorCode::precondition,
              "boundary base path is not the edge restriction of the base map");
  }
}

DiscreteTriangle horn_fill(const std::array<DiscretePath, 2>& given, int ell,
                           const Eigen::MatrixXd& f) {
  require(ell >= 0 && ell <= 2, ErrorCode::invalid_argument, "horn index must be 0, 1 or 2");
  for (const auto& p : given) p.validate();
  const int N = given[0].N();
  const int n = given[0].dim();
  require(given[1].N() == N && given[1].dim() == n, ErrorCode::shape_mismatch,
          "horn edges differ in shape");
  require(f.rows() == lattice_size(N) && f.cols() == n, ErrorCode::shape_mismatch,
          "base lattice does not match the horn edges");

  std::array<int, 2> faces;
  for (int i = 0, c = 0; i < 3; ++i)
    if (i != ell) faces[c++] = i;

  // the two edges share vertex ell
  const int shared = ell;
  auto vertex_of = [](const DiscretePath& p, int face_id, int vertex) {
    // face i has vertices (a, b), a < b; node 0 sits at a, node N at b
    const int a = face_id == 0 ? 1 : 0;
    return path_face(p, vertex == a ? 1 : 0);
  };
  require(vertex_of(given[0], faces[0], shared) == vertex_of(given[1], faces[1], shared),
          ErrorCode::precondition, "horn edges do not meet at the shared corner");
  for (int c = 0; c < 2; ++c)
    for (int k = 0; k <= N; ++k)
      require(given[c].point.row(k) == f.row(face_node(N, faces[c], k)), ErrorCode::precondition,
              "horn edge " + std::to_string(faces[c]) + " does not match the base lattice");

  static constexpr int grad[3][2] = {{-1, -1}, {1, 0}, {0, 1}};
  DiscreteTriangle out = DiscreteTriangle::zeros(N, n);
  out.point = f;
  for (int j = 0; j <= N; ++j) {
    for (int i = 0; i + j <= N; ++i) {
      const int node = lattice_index(N, i, j);
      for (int c = 0; c < 2; ++c) {
        const int fi = faces[c];
        const int b = fi == 2 ? 1 : 2;  // larger vertex of face fi
        std::array<int, 3> L = {N - i - j, i, j};
        L[ell] += L[fi];
        L[fi] = 0;
        const int t = L[b];
        int g1 = grad[b][0], g2 = grad[b][1];
        if (b == ell) {
          g1 += grad[fi][0];
          g2 += grad[fi][1];
        }
        // the collapse retraction onto face fi; multipliers are -1, 0 or 1
        if (g1 == 1) out.slot1.row(node) += given[c].covector.row(t);
        else if (g1 == -1) out.slot1.row(node) -= given[c].covector.row(t);
        if (g2 == 1) out.slot2.row(node) += given[c].covector.row(t);
        else if (g2 == -1) out.slot2.row(node) -= given[c].covector.row(t);
      }
    }
  }
  return out;
}

}  // namespace courant
