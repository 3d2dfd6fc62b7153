#include "courant/lagrangian.hpp"

#include <cmath>
#include <cstdio>
#include <random>

#include "courant/error.hpp"
#include "courant/forms.hpp"
#include "courant/quadrature.hpp"
#include "courant/simplex.hpp"

namespace courant {

namespace {

constexpr double kFaceSign[3] = {1.0, -1.0, 1.0};

// Coordinates of a tangent to compatible triples: v on the boundary loop
// (corners shared), then chi per face node. All scaled by sqrt(weight).
class Ambient {
 public:
  Ambient(int N, int n) : N_(N), n_(n), loop_of_(lattice_size(N), -1) {
    const auto w = edge_weights(N, default_sbp_rule(N));
    for (int f = 0; f < 3; ++f)
      for (int k = 0; k <= N; ++k) {
        int& l = loop_of_[face_node(N, f, k)];
        if (l < 0) {
          l = loops_++;
          loop_weight_.push_back(0.0);
        }
        loop_weight_[l] += w[k];
      }
    scale_.resize(dim());
    for (int l = 0; l < loops_; ++l)
      for (int i = 0; i < n; ++i) scale_[v(l, i)] = 1.0 / std::sqrt(loop_weight_[l]);
    for (int f = 0; f < 3; ++f)
      for (int k = 0; k <= N; ++k)
        for (int i = 0; i < n; ++i) scale_[chi(f, k, i)] = 1.0 / std::sqrt(w[k]);
  }

  int dim() const { return n_ * (loops_ + 3 * (N_ + 1)); }
  int v(int loop, int i) const { return loop * n_ + i; }
  int chi(int face, int k, int i) const { return n_ * (loops_ + face * (N_ + 1) + k) + i; }
  int loop_of_face(int face, int k) const { return loop_of_[face_node(N_, face, k)]; }
  int loop_of_node(int node) const { return loop_of_[node]; }
  const Eigen::VectorXd& scale() const { return scale_; }

  // G in scaled coordinates from the face Gram matrices of the base triangle.
  Eigen::MatrixXd gram(const DiscreteTriangle& base, const TwistClass& tw) const {
    const int m = n_ * (N_ + 1);
    const auto w = edge_weights(N_, default_sbp_rule(N_));
    Eigen::VectorXd root(2 * m);
    for (int k = 0; k <= N_; ++k)
      for (int i = 0; i < n_; ++i) root[k * n_ + i] = root[m + k * n_ + i] = std::sqrt(w[k]);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(dim(), dim());
    std::vector<int> map(2 * m);
    for (int f = 0; f < 3; ++f) {
      Eigen::MatrixXd raw = root.asDiagonal() * omega_H_1_gram(face(base, f), tw) * root.asDiagonal();
      for (int k = 0; k <= N_; ++k)
        for (int i = 0; i < n_; ++i) {
          map[k * n_ + i] = v(loop_of_face(f, k), i);
          map[m + k * n_ + i] = chi(f, k, i);
        }
      for (int a = 0; a < 2 * m; ++a)
        for (int b = 0; b < 2 * m; ++b)
          if (raw(a, b) != 0.0) G(map[a], map[b]) += kFaceSign[f] * raw(a, b);
    }
    return scale_.asDiagonal() * G * scale_.asDiagonal();
  }

  Eigen::VectorXd embed(const TangentBoundaryTriple& t) const {
    Eigen::VectorXd x(dim());
    for (int f = 0; f < 3; ++f)
      for (int k = 0; k <= N_; ++k)
        for (int i = 0; i < n_; ++i) {
          x[v(loop_of_face(f, k), i)] = t.faces[f].v()(k, i);
          x[chi(f, k, i)] = t.faces[f].chi()(k, i);
        }
    return x.cwiseQuotient(scale_);
  }

 private:
  int N_, n_;
  int loops_ = 0;
  std::vector<int> loop_of_;
  std::vector<double> loop_weight_;
  Eigen::VectorXd scale_;
};

int numerical_rank(const Eigen::VectorXd& sigma, double rel) {
  if (sigma.size() == 0 || sigma[0] == 0.0) return 0;
  int r = 0;
  while (r < sigma.size() && sigma[r] > rel * sigma[0]) ++r;
  return r;
}

Eigen::MatrixXd null_space(const Eigen::MatrixXd& A, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullV);
  const int r = numerical_rank(svd.singularValues(), rel);
  return svd.matrixV().rightCols(A.cols() - r);
}

Eigen::MatrixXd range_basis(const Eigen::MatrixXd& A, double rel) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(numerical_rank(svd.singularValues(), rel));
}

LagrangianReport analyze(const Eigen::MatrixXd& G, const Eigen::MatrixXd& probes, double sigma_cut) {
  LagrangianReport rep;
  rep.ambient_dim = static_cast<int>(G.rows());

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(probes, Eigen::ComputeThinU);
  const Eigen::VectorXd& sig = svd.singularValues();
  const int r = numerical_rank(sig, sigma_cut);
  for (int i = 0; i < sig.size(); ++i) {
    const double rel = sig[i] / sig[0];
    if (rel >= sigma_cut * 1e-2 && rel <= sigma_cut * 1e2) {
      rep.conclusive = false;
      char buf[128];
      std::snprintf(buf, sizeof buf, "probe spectrum has no gap: sigma/sigma_max = %.3g", rel);
      rep.note = buf;
      break;
    }
  }
  const Eigen::MatrixXd S = svd.matrixU().leftCols(r);
  rep.subspace_dim = r;
  rep.isotropy_residual = r ? (S.transpose() * G * S).cwiseAbs().maxCoeff() : 0.0;

  const Eigen::MatrixXd K = null_space(G, sigma_cut);
  rep.kernel_dim = static_cast<int>(K.cols());

  const Eigen::MatrixXd Y = r ? null_space(S.transpose() * G, sigma_cut)
                              : Eigen::MatrixXd::Identity(G.rows(), G.rows());
  rep.complement_dim = static_cast<int>(Y.cols());

  Eigen::MatrixXd SK(G.rows(), S.cols() + K.cols());
  SK << S, K;
  const Eigen::MatrixXd Z = range_basis(SK, sigma_cut);
  if (Y.cols() > 0) {
    const Eigen::MatrixXd R = Y - Z * (Z.transpose() * Y);
    rep.coisotropy_defect = Eigen::JacobiSVD<Eigen::MatrixXd>(R).singularValues()[0];
  }
  return rep;
}

Eigen::MatrixXd gaussian(int rows, int cols, std::mt19937_64& rng) {
  std::normal_distribution<double> z;
  Eigen::MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = z(rng);
  return m;
}

int probe_count(int n_probe, int ambient) { return n_probe > 0 ? n_probe : 2 * ambient; }

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> face_consistent_differential(const Eigen::MatrixXd& g,
                                                                          int N) {
  require(g.rows() == lattice_size(N), ErrorCode::shape_mismatch, "nodal data does not match the lattice");
  auto [s1, s2] = lattice_gradient(g, N);
  const Eigen::MatrixXd D = sbp_derivative_matrix(N, default_sbp_rule(N));
  auto along = [&](int f) {
    Eigen::MatrixXd e(N + 1, g.cols());
    for (int k = 0; k <= N; ++k) e.row(k) = g.row(face_node(N, f, k));
    return Eigen::MatrixXd(D * e);
  };
  const Eigen::MatrixXd d0 = along(0), d1 = along(1), d2 = along(2);
  for (int k = 0; k <= N; ++k) {
    s1.row(face_node(N, 2, k)) = d2.row(k);
    s2.row(face_node(N, 1, k)) = d1.row(k);
  }
  // face 0 reads slot2 - slot1; its last node is the corner owned by face 1
  for (int k = 0; k < N; ++k) {
    const int node = face_node(N, 0, k);
    s2.row(node) = s1.row(node) + d0.row(k);
  }
  const int top = face_node(N, 0, N);
  s1.row(top) = s2.row(top) - d0.row(N);
  return {s1, s2};
}

LagrangianReport lagrangian_at_unit(const DiracFrame& frame, const Eigen::VectorXd& x0, int N,
                                    int n_probe, std::uint64_t seed, double sigma_cut) {
  const int n = frame.dim(), k = frame.rank(), M = lattice_size(N);
  require(x0.size() == n, ErrorCode::dimension_mismatch, "base point dimension differs from the frame");
  require(N >= 3, ErrorCode::invalid_argument, "need N >= 3");
  AlgebroidTriangle T{frame, N, x0.transpose().replicate(M, 1), Eigen::MatrixXd::Zero(M, k),
                      Eigen::MatrixXd::Zero(M, k)};
  const DiscreteTriangle base = F_map(T);
  const Ambient amb(N, n);
  const Eigen::MatrixXd q = frame.q(std::vector<double>(x0.data(), x0.data() + n));

  std::mt19937_64 rng(seed);
  const int count = probe_count(n_probe, amb.dim());
  Eigen::MatrixXd probes(amb.dim(), count);
  for (int p = 0; p < count; ++p) {
    const Eigen::MatrixXd g = gaussian(M, k, rng);
    const Eigen::VectorXd c = gaussian(n, 1, rng);
    auto [mu1, mu2] = face_consistent_differential(g, N);
    Eigen::MatrixXd v = g * q.transpose();
    v.rowwise() += c.transpose();
    const TangentTriangle X = F_tangent(T, AlgebroidTangent{v, mu1, mu2});
    probes.col(p) = amb.embed(truncation_tangent_model(X));
  }
  return analyze(amb.gram(base, frame.twist()), probes, sigma_cut);
}

LagrangianReport lagrangian_general_bgraph(const DiracFrame& frame, const SimplexMap& f, int N,
                                           int n_probe, std::uint64_t seed, double sigma_cut) {
  require(frame.kind() == FrameKind::two_form_graph, ErrorCode::precondition,
          "the split-form tangents need a 2-form graph frame");
  require(N >= 3, ErrorCode::invalid_argument, "need N >= 3");
  const int n = frame.dim(), M = lattice_size(N);
  const AlgebroidTriangle T = build_morphism_bgraph(frame, f, N);
  const DiscreteTriangle base = F_map(T);
  const Ambient amb(N, n);
  const Eigen::MatrixXd D = sbp_derivative_matrix(N, default_sbp_rule(N));

  // per face node: B and E = (d_a B_im - d_m B_ia / 2) f'^m
  std::vector<Eigen::MatrixXd> B(3 * (N + 1)), E(3 * (N + 1));
  for (int fc = 0; fc < 3; ++fc) {
    const DiscretePath edge = face(base, fc);
    const Eigen::MatrixXd fp = D * edge.x();
    std::vector<double> x(n);
    for (int k = 0; k <= N; ++k) {
      for (int i = 0; i < n; ++i) x[i] = edge.x()(k, i);
      const auto pj = frame.p_jets(x, 1);
      Eigen::MatrixXd b(n, n), e = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i)
        for (int a = 0; a < n; ++a) {
          b(i, a) = pj[i * n + a].value();
          for (int m = 0; m < n; ++m)
            e(i, a) += (pj[i * n + m].first(a) - 0.5 * pj[i * n + a].first(m)) * fp(k, m);
        }
      B[fc * (N + 1) + k] = b;
      E[fc * (N + 1) + k] = e;
    }
  }

  std::mt19937_64 rng(seed);
  const int count = probe_count(n_probe, amb.dim());
  Eigen::MatrixXd probes(amb.dim(), count);
  for (int p = 0; p < count; ++p) {
    const Eigen::MatrixXd v = gaussian(M, n, rng);
    TangentBoundaryTriple t;
    for (int fc = 0; fc < 3; ++fc) {
      TangentPath& e = t.faces[fc];
      e = TangentPath::zeros(N, n);
      for (int k = 0; k <= N; ++k) e.v().row(k) = v.row(face_node(N, fc, k));
      Eigen::MatrixXd Bv(N + 1, n);
      for (int k = 0; k <= N; ++k) Bv.row(k) = (B[fc * (N + 1) + k] * e.v().row(k).transpose()).transpose();
      const Eigen::MatrixXd Dv = D * e.v(), DBv = D * Bv;
      for (int k = 0; k <= N; ++k) {
        const Eigen::MatrixXd& b = B[fc * (N + 1) + k];
        e.chi().row(k) = (0.5 * (b * Dv.row(k).transpose() + DBv.row(k).transpose()) +
                          E[fc * (N + 1) + k] * e.v().row(k).transpose())
                             .transpose();
      }
    }
    probes.col(p) = amb.embed(t);
  }
  return analyze(amb.gram(base, frame.twist()), probes, sigma_cut);
}

}  // namespace courant
