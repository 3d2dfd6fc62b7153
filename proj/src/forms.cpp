#include "courant/forms.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "courant/calculus.hpp"
#include "courant/error.hpp"

namespace courant {

namespace {

std::vector<double> form_weights(int N) { return edge_weights(N, default_sbp_rule(N)); }

std::shared_ptr<const PiecewiseInterpolant> interpolant(int N) {
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const PiecewiseInterpolant>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[N];
  if (!slot) slot = std::make_shared<const PiecewiseInterpolant>(N);
  return slot;
}

void require_match(const PathLattice& a, const PathLattice& b) {
  require(a.point.rows() == b.point.rows() && a.point.cols() == b.point.cols() &&
              a.covector.rows() == b.covector.rows() && a.covector.cols() == b.covector.cols(),
          ErrorCode::shape_mismatch, "path and tangent shapes differ");
}

void require_match(const TriangleLattice& a, const TriangleLattice& b) {
  require(a.N == b.N && a.point.rows() == b.point.rows() && a.point.cols() == b.point.cols() &&
              a.slot1.rows() == b.slot1.rows() && a.slot2.rows() == b.slot2.rows(),
          ErrorCode::shape_mismatch, "triangle and tangent shapes differ");
}

double omega_kernel(const Eigen::MatrixXd& v, const Eigen::MatrixXd& chi, const Eigen::MatrixXd& v2,
                    const Eigen::MatrixXd& chi2) {
  const int N = static_cast<int>(v.rows()) - 1;
  auto w = form_weights(N);
  double acc = 0.0;
  for (int k = 0; k <= N; ++k) acc += w[k] * (v.row(k).dot(chi2.row(k)) - v2.row(k).dot(chi.row(k)));
  return acc;
}

double lambda_kernel(const Eigen::MatrixXd& v, const Eigen::MatrixXd& xi) {
  const int N = static_cast<int>(v.rows()) - 1;
  auto w = form_weights(N);
  double acc = 0.0;
  for (int k = 0; k <= N; ++k) acc += w[k] * v.row(k).dot(xi.row(k));
  return acc;
}

// int T_x(a_1, ..., a_m, dx/dt) for an (m+1)-form T given by its component array
double transgression_kernel(const Eigen::MatrixXd& x, const std::vector<const Eigen::MatrixXd*>& args,
                            const SmoothField& T) {
  const int N = static_cast<int>(x.rows()) - 1;
  const int n = static_cast<int>(x.cols());
  const int m = static_cast<int>(args.size());
  auto interp = interpolant(N);
  Eigen::MatrixXd xq = interp->values(x);
  Eigen::MatrixXd dxq = interp->derivatives(x);
  std::vector<Eigen::MatrixXd> aq;
  for (const auto* a : args) aq.push_back(interp->values(*a));
  const auto& w = interp->weights();
  double acc = 0.0;
  std::vector<double> point(n);
  for (int q = 0; q < xq.rows(); ++q) {
    for (int i = 0; i < n; ++i) point[i] = xq(q, i);
    auto comps = T.values(point);
    // contract the last index with dx/dt, then the rest in order
    std::vector<double> cur(comps.size() / n);
    for (std::size_t c = 0; c < cur.size(); ++c) {
      double s = 0.0;
      for (int l = 0; l < n; ++l) s += comps[c * n + l] * dxq(q, l);
      cur[c] = s;
    }
    for (int a = m - 1; a >= 0; --a) {
      std::vector<double> next(cur.size() / n);
      for (std::size_t c = 0; c < next.size(); ++c) {
        double s = 0.0;
        for (int l = 0; l < n; ++l) s += cur[c * n + l] * aq[a](q, l);
        next[c] = s;
      }
      cur = std::move(next);
    }
    acc += w[q] * cur[0];
  }
  return acc;
}

// Face i of triangle data read straight off the lattice.
void edge_data(const TriangleLattice& t, int i, Eigen::MatrixXd& point, Eigen::MatrixXd& cov) {
  const int N = t.N;
  point.resize(N + 1, t.dim());
  cov.resize(N + 1, t.dim());
  for (int k = 0; k <= N; ++k) {
    const int node = face_node(N, i, k);
    point.row(k) = t.point.row(node);
    switch (i) {
      case 0: cov.row(k) = t.slot2.row(node) - t.slot1.row(node); break;
      case 1: cov.row(k) = t.slot2.row(node); break;
      default: cov.row(k) = t.slot1.row(node); break;
    }
  }
}

constexpr double kFaceSign[3] = {1.0, -1.0, 1.0};

}  // namespace

double sup_norm(const PathLattice& p) {
  double s = 0.0;
  if (p.point.size()) s = std::max(s, p.point.cwiseAbs().maxCoeff());
  if (p.covector.size()) s = std::max(s, p.covector.cwiseAbs().maxCoeff());
  return s;
}

double lambda1(const DiscretePath& base, const TangentPath& X) {
  base.validate();
  require_match(base, X);
  return lambda_kernel(X.v(), base.xi());
}

double omega1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y) {
  base.validate();
  require_match(base, X);
  require_match(base, Y);
  return omega_kernel(X.v(), X.chi(), Y.v(), Y.chi());
}

double phi_H_1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
               const TwistClass& tw) {
  base.validate();
  require_match(base, X);
  require_match(base, Y);
  require(tw.dim() == base.dim(), ErrorCode::dimension_mismatch, "twist and path charts differ");
  if (tw.is_zero()) return 0.0;
  return transgression_kernel(base.x(), {&X.v(), &Y.v()}, tw.H());
}

double omega_H_1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
                 const TwistClass& tw) {
  return omega1(base, X, Y) + phi_H_1(base, X, Y, tw);
}

double transgress_four_form(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
                            const TangentPath& Z, const SmoothField& K) {
  base.validate();
  require_match(base, X);
  require_match(base, Y);
  require_match(base, Z);
  require(K.kind() == FieldKind::four_form, ErrorCode::degree, "expected a four-form");
  require(K.dim() == base.dim(), ErrorCode::dimension_mismatch, "form and path charts differ");
  return transgression_kernel(base.x(), {&X.v(), &Y.v(), &Z.v()}, K);
}

double lambda2(const DiscreteTriangle& base, const TangentTriangle& X) {
  base.validate();
  require_match(base, X);
  Eigen::MatrixXd p, xi, v, chi;
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    edge_data(base, i, p, xi);
    edge_data(X, i, v, chi);
    acc += kFaceSign[i] * lambda_kernel(v, xi);
  }
  return acc;
}

double omega2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y) {
  base.validate();
  require_match(base, X);
  require_match(base, Y);
  Eigen::MatrixXd v, chi, v2, chi2;
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    edge_data(X, i, v, chi);
    edge_data(Y, i, v2, chi2);
    acc += kFaceSign[i] * omega_kernel(v, chi, v2, chi2);
  }
  return acc;
}

double phi_H_2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y,
               const TwistClass& tw) {
  base.validate();
  require_match(base, X);
  require_match(base, Y);
  require(tw.dim() == base.dim(), ErrorCode::dimension_mismatch, "twist and triangle charts differ");
  if (tw.is_zero()) return 0.0;
  Eigen::MatrixXd x, xi, v, chi, v2, chi2;
  double acc = 0.0;
  for (int i = 0; i < 3; ++i) {
    edge_data(base, i, x, xi);
    edge_data(X, i, v, chi);
    edge_data(Y, i, v2, chi2);
    acc += kFaceSign[i] * transgression_kernel(x, {&v, &v2}, tw.H());
  }
  return acc;
}

double omega_H_2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y,
                 const TwistClass& tw) {
  return omega2(base, X, Y) + phi_H_2(base, X, Y, tw);
}

double PathForm::operator()(const DiscretePath& base, std::span<const TangentPath> args) const {
  require(static_cast<int>(args.size()) == degree, ErrorCode::invalid_argument,
          "form expects " + std::to_string(degree) + " tangent arguments");
  return eval(base, args);
}

double TriangleForm::operator()(const DiscreteTriangle& base,
                                std::span<const TangentTriangle> args) const {
  require(static_cast<int>(args.size()) == degree, ErrorCode::invalid_argument,
          "form expects " + std::to_string(degree) + " tangent arguments");
  return eval(base, args);
}

PathForm lambda1_form() {
  return {1, [](const DiscretePath& b, std::span<const TangentPath> a) { return lambda1(b, a[0]); }};
}

PathForm omega1_form() {
  return {2, [](const DiscretePath& b, std::span<const TangentPath> a) { return omega1(b, a[0], a[1]); }};
}

PathForm phi_H_1_form(const TwistClass& tw) {
  return {2, [tw](const DiscretePath& b, std::span<const TangentPath> a) {
            return phi_H_1(b, a[0], a[1], tw);
          }};
}

PathForm omega_H_1_form(const TwistClass& tw) {
  return {2, [tw](const DiscretePath& b, std::span<const TangentPath> a) {
            return omega_H_1(b, a[0], a[1], tw);
          }};
}

TriangleForm simplicial_coboundary(const PathForm& form) {
  return {form.degree, [form](const DiscreteTriangle& b, std::span<const TangentTriangle> args) {
            double acc = 0.0;
            std::vector<TangentPath> pushed(args.size());
            for (int i = 0; i < 3; ++i) {
              for (std::size_t a = 0; a < args.size(); ++a) pushed[a] = face(args[a], i);
              acc += kFaceSign[i] * form(face(b, i), pushed);
            }
            return acc;
          }};
}

PathForm exterior_derivative_mapping(const PathForm& form, double h) {
  require(h > 0.0, ErrorCode::invalid_argument, "mapping-space step must be positive");
  return {form.degree + 1, [form, h](const DiscretePath& base, std::span<const TangentPath> args) {
            const int k = form.degree;
            double acc = 0.0;
            std::vector<TangentPath> rest(k);
            for (int i = 0; i <= k; ++i) {
              for (int a = 0, r = 0; a <= k; ++a)
                if (a != i) rest[r++] = args[a];
              const TangentPath& dir = args[i];
              const double scale = sup_norm(dir);
              if (scale == 0.0) continue;
              auto shifted = [&](double s) {
                DiscretePath p = base;
                p.point += (s / scale) * dir.point;
                p.covector += (s / scale) * dir.covector;
                return form(p, rest);
              };
              const double d = (-shifted(2 * h) + 8 * shifted(h) - 8 * shifted(-h) + shifted(-2 * h)) /
                               (12 * h);
              acc += (i % 2 ? -1.0 : 1.0) * scale * d;
            }
            return acc;
          }};
}

Eigen::MatrixXd omega_H_1_gram(const DiscretePath& base, const TwistClass& tw) {
  base.validate();
  const int N = base.N(), n = base.dim();
  const int m = n * (N + 1);
  auto w = form_weights(N);
  // coordinates: [v (node-major), chi (node-major)]
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * m, 2 * m);
  for (int k = 0; k <= N; ++k) {
    for (int i = 0; i < n; ++i) {
      const int a = k * n + i;
      // w_k v chi' / (sqrt(w_k) sqrt(w_k))
      G(a, m + a) = 1.0;
      G(m + a, a) = -1.0;
    }
  }
  if (!tw.is_zero()) {
    auto interp = interpolant(N);
    Eigen::MatrixXd xq = interp->values(base.x());
    Eigen::MatrixXd dxq = interp->derivatives(base.x());
    const auto& L = interp->values(Eigen::MatrixXd::Identity(N + 1, N + 1));
    std::vector<double> point(n);
    for (int q = 0; q < xq.rows(); ++q) {
      for (int i = 0; i < n; ++i) point[i] = xq(q, i);
      auto H = tw.H().values(point);
      Eigen::MatrixXd M(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += H[(i * n + j) * n + l] * dxq(q, l);
          M(i, j) = s;
        }
      const double wq = interp->weights()[q];
      for (int k1 = 0; k1 <= N; ++k1) {
        const double l1 = L(q, k1);
        if (l1 == 0.0) continue;
        for (int k2 = 0; k2 <= N; ++k2) {
          const double l2 = L(q, k2);
          if (l2 == 0.0) continue;
          const double c = wq * l1 * l2 / std::sqrt(w[k1] * w[k2]);
          G.block(k1 * n, k2 * n, n, n) += c * M;
        }
      }
    }
  }
  return G;
}

}  // namespace courant
