#include "courant/morphisms.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "courant/calculus.hpp"
#include "courant/error.hpp"
#include "courant/quadrature.hpp"

namespace courant {

namespace {

double sup(const TriangleLattice& t) {
  return std::max({t.point.cwiseAbs().maxCoeff(), t.slot1.cwiseAbs().maxCoeff(),
                   t.slot2.cwiseAbs().maxCoeff()});
}

void normalize(TangentTriangle& t) {
  const double s = sup(t);
  if (s == 0.0) return;
  t.point /= s;
  t.slot1 /= s;
  t.slot2 /= s;
}

// C(x) and d_k C(x) by central differences.
struct CJet {
  StructureFunctions C;
  std::vector<StructureFunctions> dC;
};

CJet structure_jet(const DiracFrame& frame, const std::vector<double>& x, double h = 1e-5) {
  CJet out{structure_functions(frame, x), {}};
  std::vector<double> xp = x, xm = x;
  for (std::size_t k = 0; k < x.size(); ++k) {
    xp[k] = x[k] + h;
    xm[k] = x[k] - h;
    auto cp = structure_functions(frame, xp), cm = structure_functions(frame, xm);
    for (std::size_t c = 0; c < cp.C.size(); ++c) cp.C[c] = (cp.C[c] - cm.C[c]) / (2 * h);
    out.dC.push_back(cp);
    xp[k] = xm[k] = x[k];
  }
  return out;
}

void require_kind(const DiracFrame& frame, FrameKind kind, const char* what) {
  require(frame.kind() == kind, ErrorCode::precondition, std::string(what) + " needs a frame of the matching kind");
}

bool constant_generator(const DiracFrame& frame) {
  if (!frame.generator()) return false;
  for (const auto& x : sample_points(frame.dim(), 8, 0xC0)) {
    for (const auto& j : frame.generator()->jets(x, 1))
      for (int d = 0; d < frame.dim(); ++d)
        if (j.first(d) != 0.0) return false;
  }
  return true;
}

}  // namespace

// ---- SimplexMap ----

SimplexMap::SimplexMap(int degree, Eigen::MatrixXd coeffs) : degree_(degree), coeffs_(std::move(coeffs)) {
  require(degree >= 0, ErrorCode::invalid_argument, "negative degree");
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) monomials_.emplace_back(a, d - a);
  require(coeffs_.cols() == static_cast<int>(monomials_.size()), ErrorCode::shape_mismatch,
          "coefficient table does not match the degree");
}

SimplexMap SimplexMap::random(int components, int degree, double amplitude, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-amplitude, amplitude);
  const int terms = (degree + 1) * (degree + 2) / 2;
  Eigen::MatrixXd c(components, terms);
  for (int i = 0; i < components; ++i)
    for (int t = 0; t < terms; ++t) c(i, t) = u(rng);
  return SimplexMap(degree, c);
}

SimplexMap SimplexMap::constant(const Eigen::VectorXd& value) { return SimplexMap(0, value); }

Eigen::VectorXd SimplexMap::value(double s1, double s2) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(components());
  for (std::size_t t = 0; t < monomials_.size(); ++t) {
    auto [a, b] = monomials_[t];
    out += coeffs_.col(t) * (std::pow(s1, a) * std::pow(s2, b));
  }
  return out;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> SimplexMap::gradient(double s1, double s2) const {
  Eigen::VectorXd d1 = Eigen::VectorXd::Zero(components()), d2 = d1;
  for (std::size_t t = 0; t < monomials_.size(); ++t) {
    auto [a, b] = monomials_[t];
    if (a > 0) d1 += coeffs_.col(t) * (a * std::pow(s1, a - 1) * std::pow(s2, b));
    if (b > 0) d2 += coeffs_.col(t) * (b * std::pow(s1, a) * std::pow(s2, b - 1));
  }
  return {d1, d2};
}

Eigen::MatrixXd SimplexMap::sample(int N) const {
  Eigen::MatrixXd out(lattice_size(N), components());
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i)
      out.row(lattice_index(N, i, j)) = value(double(i) / N, double(j) / N).transpose();
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> SimplexMap::sample_gradient(int N) const {
  Eigen::MatrixXd d1(lattice_size(N), components()), d2 = d1;
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i) {
      auto [g1, g2] = gradient(double(i) / N, double(j) / N);
      d1.row(lattice_index(N, i, j)) = g1.transpose();
      d2.row(lattice_index(N, i, j)) = g2.transpose();
    }
  return {d1, d2};
}

SimplexMap SimplexMap::operator+(const SimplexMap& o) const {
  require(components() == o.components(), ErrorCode::shape_mismatch, "map components differ");
  const int deg = std::max(degree_, o.degree_);
  SimplexMap out(deg, Eigen::MatrixXd::Zero(components(), (deg + 1) * (deg + 2) / 2));
  // monomial order is graded, so lower-degree tables are prefixes
  out.coeffs_.leftCols(coeffs_.cols()) += coeffs_;
  out.coeffs_.leftCols(o.coeffs_.cols()) += o.coeffs_;
  return out;
}

SimplexMap SimplexMap::operator*(double s) const { return SimplexMap(degree_, coeffs_ * s); }

SimplexMap SimplexMap::mapped(const Eigen::MatrixXd& A) const {
  require(A.cols() == components(), ErrorCode::shape_mismatch, "matrix does not match map components");
  return SimplexMap(degree_, A * coeffs_);
}

// ---- residuals ----

ResidualPair morphism_residual(const AlgebroidTriangle& T) {
  const int N = T.N, n = T.frame.dim(), k = T.frame.rank();
  const int M = lattice_size(N);
  require(T.f.rows() == M && T.f.cols() == n && T.psi1.rows() == M && T.psi1.cols() == k &&
              T.psi2.rows() == M && T.psi2.cols() == k,
          ErrorCode::shape_mismatch, "algebroid triangle arrays do not match the lattice");
  auto [f1, f2] = lattice_gradient(T.f, N);
  auto [p11, p12] = lattice_gradient(T.psi1, N);
  auto [p21, p22] = lattice_gradient(T.psi2, N);
  ResidualPair r;
  for (int node = 0; node < M; ++node) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = T.f(node, i);
    Eigen::MatrixXd q = T.frame.q(x);
    Eigen::VectorXd e1 = f1.row(node).transpose() - q * T.psi1.row(node).transpose();
    Eigen::VectorXd e2 = f2.row(node).transpose() - q * T.psi2.row(node).transpose();
    r.r1 = std::max({r.r1, e1.cwiseAbs().maxCoeff(), e2.cwiseAbs().maxCoeff()});
    auto C = structure_functions(T.frame, x);
    for (int g = 0; g < k; ++g) {
      double val = p21(node, g) - p12(node, g);
      for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) val += C(g, a, b) * T.psi1(node, a) * T.psi2(node, b);
      r.r2 = std::max(r.r2, std::abs(val));
    }
  }
  return r;
}

ResidualPair tangent_residual(const AlgebroidTriangle& T, const AlgebroidTangent& t) {
  const int N = T.N, n = T.frame.dim(), k = T.frame.rank();
  const int M = lattice_size(N);
  require(t.v.rows() == M && t.v.cols() == n && t.mu1.rows() == M && t.mu1.cols() == k &&
              t.mu2.rows() == M && t.mu2.cols() == k,
          ErrorCode::shape_mismatch, "algebroid tangent arrays do not match the lattice");
  auto [v1, v2] = lattice_gradient(t.v, N);
  auto [m11, m12] = lattice_gradient(t.mu1, N);
  auto [m21, m22] = lattice_gradient(t.mu2, N);
  ResidualPair r;
  std::vector<double> x(n);
  for (int node = 0; node < M; ++node) {
    for (int i = 0; i < n; ++i) x[i] = T.f(node, i);
    auto qj = T.frame.q_jets(x, 1);
    for (int i = 0; i < n; ++i) {
      double e1 = v1(node, i), e2 = v2(node, i);
      for (int a = 0; a < k; ++a) {
        const Jet& q = qj[i * k + a];
        double dq = 0.0;
        for (int j = 0; j < n; ++j) dq += t.v(node, j) * q.first(j);
        e1 -= dq * T.psi1(node, a) + q.value() * t.mu1(node, a);
        e2 -= dq * T.psi2(node, a) + q.value() * t.mu2(node, a);
      }
      r.r1 = std::max({r.r1, std::abs(e1), std::abs(e2)});
    }
    auto cj = structure_jet(T.frame, x);
    for (int g = 0; g < k; ++g) {
      double val = m21(node, g) - m12(node, g);
      for (int a = 0; a < k; ++a) {
        for (int b = 0; b < k; ++b) {
          val += cj.C(g, a, b) *
                 (T.psi1(node, a) * t.mu2(node, b) - T.psi2(node, a) * t.mu1(node, b));
          double vdC = 0.0;
          for (int j = 0; j < n; ++j) vdC += t.v(node, j) * cj.dC[j](g, a, b);
          val += vdC * T.psi1(node, a) * T.psi2(node, b);
        }
      }
      r.r2 = std::max(r.r2, std::abs(val));
    }
  }
  return r;
}

// ---- families ----

AlgebroidTriangle build_morphism_bgraph(const DiracFrame& frame, const SimplexMap& f, int N) {
  require_kind(frame, FrameKind::two_form_graph, "the 2-form graph family");
  require(f.components() == frame.dim(), ErrorCode::dimension_mismatch, "base map dimension differs from the frame");
  auto [d1, d2] = f.sample_gradient(N);
  return AlgebroidTriangle{frame, N, f.sample(N), d1, d2};
}

AlgebroidTriangle build_morphism_constpi(const DiracFrame& frame, const SimplexMap& g,
                                         const Eigen::VectorXd& f0, int N) {
  require_kind(frame, FrameKind::bivector_graph, "the constant bivector family");
  require(constant_generator(frame), ErrorCode::precondition, "the bivector is not constant");
  require(g.components() == frame.rank() && f0.size() == frame.dim(), ErrorCode::dimension_mismatch,
          "family data does not match the frame");
  Eigen::MatrixXd q = frame.q(std::vector<double>(frame.dim(), 0.0));
  Eigen::MatrixXd gs = g.sample(N);
  Eigen::RowVectorXd g0 = gs.row(0);
  Eigen::MatrixXd f = (gs.rowwise() - g0) * q.transpose();
  f.rowwise() += f0.transpose();
  auto [d1, d2] = g.sample_gradient(N);
  return AlgebroidTriangle{frame, N, f, d1, d2};
}

AlgebroidTangent build_tangent_bgraph(const AlgebroidTriangle& T, const SimplexMap& v) {
  require_kind(T.frame, FrameKind::two_form_graph, "the 2-form graph family");
  auto [d1, d2] = v.sample_gradient(T.N);
  return AlgebroidTangent{v.sample(T.N), d1, d2};
}

AlgebroidTangent build_tangent_constpi(const AlgebroidTriangle& T, const SimplexMap& h,
                                       const Eigen::VectorXd& v0) {
  require_kind(T.frame, FrameKind::bivector_graph, "the constant bivector family");
  Eigen::MatrixXd q = T.frame.q(std::vector<double>(T.frame.dim(), 0.0));
  Eigen::MatrixXd hs = h.sample(T.N);
  Eigen::RowVectorXd h0 = hs.row(0);
  Eigen::MatrixXd v = (hs.rowwise() - h0) * q.transpose();
  v.rowwise() += v0.transpose();
  auto [d1, d2] = h.sample_gradient(T.N);
  return AlgebroidTangent{v, d1, d2};
}

DiscreteTriangle F_map(const AlgebroidTriangle& T) {
  const int n = T.frame.dim();
  DiscreteTriangle out = DiscreteTriangle::zeros(T.N, n);
  out.point = T.f;
  std::vector<double> x(n);
  for (int node = 0; node < T.f.rows(); ++node) {
    for (int i = 0; i < n; ++i) x[i] = T.f(node, i);
    Eigen::MatrixXd p = T.frame.p(x);
    out.slot1.row(node) = (p * T.psi1.row(node).transpose()).transpose();
    out.slot2.row(node) = (p * T.psi2.row(node).transpose()).transpose();
  }
  return out;
}

TangentTriangle F_tangent(const AlgebroidTriangle& T, const AlgebroidTangent& t) {
  const int n = T.frame.dim(), k = T.frame.rank();
  TangentTriangle out = TangentTriangle::zeros(T.N, n);
  out.point = t.v;
  std::vector<double> x(n);
  for (int node = 0; node < T.f.rows(); ++node) {
    for (int i = 0; i < n; ++i) x[i] = T.f(node, i);
    auto pj = T.frame.p_jets(x, 1);
    for (int i = 0; i < n; ++i) {
      double c1 = 0.0, c2 = 0.0;
      for (int a = 0; a < k; ++a) {
        const Jet& p = pj[i * k + a];
        double dp = 0.0;
        for (int j = 0; j < n; ++j) dp += t.v(node, j) * p.first(j);
        c1 += dp * T.psi1(node, a) + p.value() * t.mu1(node, a);
        c2 += dp * T.psi2(node, a) + p.value() * t.mu2(node, a);
      }
      out.slot1(node, i) = c1;
      out.slot2(node, i) = c2;
    }
  }
  return out;
}

PushforwardCheckResult pushforward_isotropy_check(const DiracFrame& frame, MorphismFamily family, int N,
                        const PushforwardCheckOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  const int n = frame.dim(), k = frame.rank();
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  AlgebroidTriangle T = [&] {
    if (family == MorphismFamily::bgraph)
      return build_morphism_bgraph(frame, SimplexMap::random(n, opts.degree, opts.base_amplitude, rng), N);
    auto g = SimplexMap::random(k, opts.degree, opts.base_amplitude, rng);
    Eigen::VectorXd f0(n);
    for (int i = 0; i < n; ++i) f0[i] = opts.base_amplitude * u(rng);
    return build_morphism_constpi(frame, g, f0, N);
  }();
  auto tangent = [&] {
    if (family == MorphismFamily::bgraph)
      return build_tangent_bgraph(T, SimplexMap::random(n, opts.degree, opts.tangent_amplitude, rng));
    auto h = SimplexMap::random(k, opts.degree, opts.tangent_amplitude, rng);
    Eigen::VectorXd v0(n);
    for (int i = 0; i < n; ++i) v0[i] = opts.tangent_amplitude * u(rng);
    return build_tangent_constpi(T, h, v0);
  };
  const DiscreteTriangle base = F_map(T);
  const TriangleForm delta = simplicial_coboundary(omega_H_1_form(frame.twist()));
  PushforwardCheckResult out;
  for (int p = 0; p < opts.pairs; ++p) {
    TangentTriangle X = F_tangent(T, tangent());
    TangentTriangle Y = F_tangent(T, tangent());
    normalize(X);
    normalize(Y);
    out.residual = std::max(out.residual, std::abs(omega_H_2(base, X, Y, frame.twist())));
    std::array<TangentTriangle, 2> args{X, Y};
    out.coboundary_residual = std::max(out.coboundary_residual, std::abs(delta(base, args)));
  }
  return out;
}

// ---- A-paths ----

namespace {

// Second-order nodal derivative on [0,1].
Eigen::MatrixXd nodal_derivative(const Eigen::MatrixXd& x) {
  const int N = static_cast<int>(x.rows()) - 1;
  require(N >= 2, ErrorCode::invalid_argument, "need at least 3 nodes");
  Eigen::MatrixXd d(x.rows(), x.cols());
  d.row(0) = (-3 * x.row(0) + 4 * x.row(1) - x.row(2)) * (N / 2.0);
  d.row(N) = (3 * x.row(N) - 4 * x.row(N - 1) + x.row(N - 2)) * (N / 2.0);
  for (int k = 1; k < N; ++k) d.row(k) = (x.row(k + 1) - x.row(k - 1)) * (N / 2.0);
  return d;
}

Eigen::MatrixXd sample_poly_path(const Eigen::MatrixXd& c, int N, bool derivative) {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(N + 1, c.cols());
  for (int k = 0; k <= N; ++k) {
    const double t = double(k) / N;
    for (int j = 0; j < c.rows(); ++j) {
      if (derivative) {
        if (j > 0) out.row(k) += c.row(j) * (j * std::pow(t, j - 1));
      } else {
        out.row(k) += c.row(j) * std::pow(t, j);
      }
    }
  }
  return out;
}

}  // namespace

APath build_apath_bgraph(const DiracFrame& frame, const Eigen::MatrixXd& poly_coeffs, int N) {
  require_kind(frame, FrameKind::two_form_graph, "the 2-form graph A-path family");
  require(poly_coeffs.cols() == frame.dim(), ErrorCode::dimension_mismatch, "path dimension differs from the frame");
  const int n = frame.dim();
  APath out;
  out.path = DiscretePath::zeros(N, n);
  out.path.x() = sample_poly_path(poly_coeffs, N, false);
  out.a = sample_poly_path(poly_coeffs, N, true);
  std::vector<double> x(n);
  for (int k = 0; k <= N; ++k) {
    for (int i = 0; i < n; ++i) x[i] = out.path.x()(k, i);
    out.path.xi().row(k) = (frame.p(x) * out.a.row(k).transpose()).transpose();
  }
  return out;
}

double apath_residual(const DiracFrame& frame, const APath& p) {
  p.path.validate();
  const int n = frame.dim();
  require(p.path.dim() == n, ErrorCode::dimension_mismatch, "path dimension differs from the frame");
  Eigen::MatrixXd dx = nodal_derivative(p.path.x());
  double worst = 0.0;
  std::vector<double> x(n);
  for (int k = 0; k <= p.path.N(); ++k) {
    for (int i = 0; i < n; ++i) x[i] = p.path.x()(k, i);
    Eigen::MatrixXd A(2 * n, frame.rank());
    A.topRows(n) = frame.q(x);
    A.bottomRows(n) = frame.p(x);
    Eigen::VectorXd target(2 * n);
    target.head(n) = dx.row(k).transpose();
    target.tail(n) = p.path.xi().row(k).transpose();
    Eigen::VectorXd c = A.colPivHouseholderQr().solve(target);
    worst = std::max(worst, (A * c - target).norm());
  }
  return worst;
}

double pullback_closedness(const DiracFrame& frame, MorphismFamily family, int N, int triples,
                        std::uint64_t seed, double h) {
  const int n = frame.dim(), k = frame.rank();
  const TwistClass& tw = frame.twist();
  const EdgeRule rule = default_sbp_rule(N);
  const Eigen::MatrixXd D = sbp_derivative_matrix(N, rule);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random_poly_path = [&](int cols, double amp) {
    Eigen::MatrixXd c(4, cols);
    for (int r = 0; r < 4; ++r)
      for (int j = 0; j < cols; ++j) c(r, j) = amp * u(rng);
    return sample_poly_path(c, N, false);
  };

  // Parameters P of the A-path family, the path they define, and the
  // pushforward of a parameter direction.
  std::function<DiscretePath(const Eigen::MatrixXd&)> F;
  std::function<TangentPath(const Eigen::MatrixXd&, const Eigen::MatrixXd&)> TF;
  Eigen::MatrixXd P0;
  std::function<Eigen::MatrixXd()> direction;
  std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)> base_velocity;  // v of a direction

  if (family == MorphismFamily::bgraph) {
    require_kind(frame, FrameKind::two_form_graph, "the 2-form graph A-path family");
    // P = nodal path x; xi = p(x) Dx
    F = [&frame, &D, n, N](const Eigen::MatrixXd& x) {
      DiscretePath out = DiscretePath::zeros(N, n);
      out.x() = x;
      Eigen::MatrixXd dx = D * x;
      std::vector<double> pt(n);
      for (int r = 0; r <= N; ++r) {
        for (int i = 0; i < n; ++i) pt[i] = x(r, i);
        out.xi().row(r) = (frame.p(pt) * dx.row(r).transpose()).transpose();
      }
      return out;
    };
    TF = [&frame, &D, n, k, N](const Eigen::MatrixXd& x, const Eigen::MatrixXd& a) {
      TangentPath out = TangentPath::zeros(N, n);
      out.v() = a;
      Eigen::MatrixXd dx = D * x, da = D * a;
      std::vector<double> pt(n);
      for (int r = 0; r <= N; ++r) {
        for (int i = 0; i < n; ++i) pt[i] = x(r, i);
        auto pj = frame.p_jets(pt, 1);
        for (int i = 0; i < n; ++i) {
          double c = 0.0;
          for (int al = 0; al < k; ++al) {
            const Jet& p = pj[i * k + al];
            double dp = 0.0;
            for (int j = 0; j < n; ++j) dp += a(r, j) * p.first(j);
            c += dp * dx(r, al) + p.value() * da(r, al);
          }
          out.chi()(r, i) = c;
        }
      }
      return out;
    };
    P0 = random_poly_path(n, 0.5);
    direction = [&] { return random_poly_path(n, 1.0); };
    base_velocity = [](const Eigen::MatrixXd& a) { return a; };
  } else {
    require_kind(frame, FrameKind::bivector_graph, "the constant bivector A-path family");
    require(constant_generator(frame), ErrorCode::precondition, "the bivector is not constant");
    const Eigen::MatrixXd q = frame.q(std::vector<double>(n, 0.0));
    const Eigen::MatrixXd p = frame.p(std::vector<double>(n, 0.0));
    // P = [x0 row; g nodal (N+1) x k]; x = x0 + (g - g(0)) q^T, xi = Dg p^T
    auto path_of = [q, p, &D, n, k, N](const Eigen::MatrixXd& P) {
      DiscretePath out = DiscretePath::zeros(N, n);
      Eigen::MatrixXd g = P.bottomRows(N + 1).leftCols(k);
      Eigen::RowVectorXd g0 = g.row(0);
      out.x() = (g.rowwise() - g0) * q.transpose();
      out.x().rowwise() += P.row(0).leftCols(n);
      out.xi() = (D * g) * p.transpose();
      return out;
    };
    F = path_of;
    TF = [path_of](const Eigen::MatrixXd&, const Eigen::MatrixXd& A) {
      DiscretePath lin = path_of(A);
      TangentPath out;
      out.point = lin.point;
      out.covector = lin.covector;
      return out;
    };
    const int cols = std::max(n, k);
    auto make = [&, cols](double amp) {
      Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N + 2, cols);
      for (int j = 0; j < n; ++j) P(0, j) = amp * u(rng);
      P.bottomRows(N + 1).leftCols(k) = random_poly_path(k, amp);
      return P;
    };
    P0 = make(0.5);
    direction = [make] { return make(1.0); };
    base_velocity = [path_of](const Eigen::MatrixXd& A) { return path_of(A).x(); };
  }

  auto beta = [&](const Eigen::MatrixXd& P, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return omega_H_1(F(P), TF(P, a), TF(P, b), tw);
  };
  auto directional = [&](const Eigen::MatrixXd& dir, const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    auto at = [&](double s) { return beta(P0 + s * dir, a, b); };
    return (-at(2 * h) + 8 * at(h) - 8 * at(-h) + at(-2 * h)) / (12 * h);
  };

  double worst = 0.0;
  for (int t = 0; t < triples; ++t) {
    Eigen::MatrixXd a = direction(), b = direction(), c = direction();
    a /= a.cwiseAbs().maxCoeff();
    b /= b.cwiseAbs().maxCoeff();
    c /= c.cwiseAbs().maxCoeff();
    const double d = directional(a, b, c) - directional(b, a, c) + directional(c, a, b);
    double endpoint = 0.0;
    if (!tw.is_zero()) {
      const DiscretePath base = F(P0);
      const Eigen::MatrixXd va = base_velocity(a), vb = base_velocity(b), vc = base_velocity(c);
      for (int end : {0, N}) {
        std::vector<double> pt(n);
        for (int i = 0; i < n; ++i) pt[i] = base.x()(end, i);
        auto H = tw.H().values(pt);
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            for (int l = 0; l < n; ++l) s += H[(i * n + j) * n + l] * va(end, i) * vb(end, j) * vc(end, l);
        endpoint += end == N ? s : -s;
      }
    }
    worst = std::max(worst, std::abs(d - endpoint));
  }
  return worst;
}

}  // namespace courant
