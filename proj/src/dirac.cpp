#include "courant/dirac.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "courant/calculus.hpp"
#include "courant/error.hpp"

namespace courant {

namespace {

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

Eigen::MatrixXd stacked(const DiracFrame& f, std::span<const double> x) {
  const int n = f.dim(), k = f.rank();
  Eigen::MatrixXd A(2 * n, k);
  A.topRows(n) = f.q(x);
  A.bottomRows(n) = f.p(x);
  return A;
}

Eigen::VectorXd stacked(const GeneralizedSection& s, std::span<const double> x) {
  const int n = s.dim();
  Eigen::VectorXd v(2 * n);
  auto X = s.X.values(x), xi = s.xi.values(x);
  for (int i = 0; i < n; ++i) {
    v[i] = X[i];
    v[n + i] = xi[i];
  }
  return v;
}

}  // namespace

DiracFrame::DiracFrame(std::vector<GeneralizedSection> sections, TwistClass twist, FrameKind kind,
                       FrameOptions opts)
    : dim_(twist.dim()), kind_(kind), twist_(std::move(twist)), sections_(std::move(sections)) {
  const int k = rank();
  require(k >= 1, ErrorCode::invalid_argument, "a frame needs at least one section");
  for (const auto& s : sections_)
    require(s.dim() == dim_, ErrorCode::dimension_mismatch, "section and twist charts differ");
  require(k <= dim_, ErrorCode::invalid_argument, "more sections than the chart dimension");
  require(k == dim_ || opts.allow_non_maximal, ErrorCode::precondition,
          "frame has " + std::to_string(k) + " sections in dimension " + std::to_string(dim_) +
              "; non-maximal frames need allow_non_maximal");
  for (int a = 0; a < k; ++a)
    for (int b = a + 1; b < k; ++b) brackets_.push_back(twisted_bracket(sections_[a], sections_[b], twist_));
  if (!opts.validate) return;

  const auto points = sample_points(dim_, opts.validation_points, opts.seed);
  for (const auto& x : points) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked(*this, x));
    const auto& s = svd.singularValues();
    require(s[k - 1] > 1e-10 * std::max(1.0, s[0]), ErrorCode::rank_deficient,
            "frame sections are linearly dependent at a sampled point");
  }
  checked_isotropy_ = isotropy_residual(*this, points);
  require(checked_isotropy_ < opts.isotropy_tol, ErrorCode::precondition,
          "frame is not isotropic: residual " + fmt(checked_isotropy_));
  checked_involutivity_ = involutivity_residual(*this, points);
  require(checked_involutivity_ < opts.involutivity_tol, ErrorCode::precondition,
          "frame is not involutive for the given twist: residual " + fmt(checked_involutivity_));
}

DiracFrame DiracFrame::graph_of_two_form(const SmoothField& B, const TwistClass& twist,
                                         FrameOptions opts) {
  require(B.kind() == FieldKind::two_form, ErrorCode::shape_mismatch, "B must be a two-form");
  require(B.dim() == twist.dim(), ErrorCode::dimension_mismatch, "B and twist charts differ");
  const int n = B.dim();
  std::vector<GeneralizedSection> sections;
  for (int a = 0; a < n; ++a) {
    std::vector<double> e(n, 0.0);
    e[a] = 1.0;
    SmoothField xi(
        FieldKind::one_form, n,
        [B, n, a](std::span<const double> x, int order) {
          auto b = B.jets(x, order);
          std::vector<Jet> out;
          for (int i = 0; i < n; ++i) out.push_back(b[i * n + a]);
          return out;
        },
        B.mode(), B.step());
    sections.emplace_back(SmoothField::constant(FieldKind::vector, n, e), xi);
  }
  DiracFrame f(std::move(sections), twist, FrameKind::two_form_graph, opts);
  f.generator_ = B;
  return f;
}

DiracFrame DiracFrame::graph_of_bivector(const SmoothField& pi, FrameOptions opts) {
  require(pi.kind() == FieldKind::bivector, ErrorCode::shape_mismatch, "pi must be a bivector");
  const int n = pi.dim();
  std::vector<GeneralizedSection> sections;
  for (int a = 0; a < n; ++a) {
    std::vector<double> e(n, 0.0);
    e[a] = 1.0;
    SmoothField X(
        FieldKind::vector, n,
        [pi, n, a](std::span<const double> x, int order) {
          auto p = pi.jets(x, order);
          return std::vector<Jet>(p.begin() + a * n, p.begin() + (a + 1) * n);
        },
        pi.mode(), pi.step());
    sections.emplace_back(X, SmoothField::constant(FieldKind::one_form, n, e));
  }
  DiracFrame f(std::move(sections), TwistClass::none(n), FrameKind::bivector_graph, opts);
  f.generator_ = pi;
  return f;
}

DiracFrame DiracFrame::constant(const Eigen::MatrixXd& q, const Eigen::MatrixXd& p,
                                const TwistClass& twist, FrameOptions opts) {
  const int n = twist.dim();
  require(q.rows() == n && p.rows() == n && q.cols() == p.cols(), ErrorCode::shape_mismatch,
          "coefficient matrices must be n x k");
  std::vector<GeneralizedSection> sections;
  for (int a = 0; a < q.cols(); ++a) {
    std::vector<double> qa(q.col(a).data(), q.col(a).data() + n);
    std::vector<double> pa(p.col(a).data(), p.col(a).data() + n);
    sections.emplace_back(SmoothField::constant(FieldKind::vector, n, qa),
                          SmoothField::constant(FieldKind::one_form, n, pa));
  }
  return DiracFrame(std::move(sections), twist, FrameKind::custom, opts);
}

Eigen::MatrixXd DiracFrame::q(std::span<const double> x) const {
  Eigen::MatrixXd m(dim_, rank());
  for (int a = 0; a < rank(); ++a) {
    auto v = sections_[a].X.values(x);
    for (int i = 0; i < dim_; ++i) m(i, a) = v[i];
  }
  return m;
}

Eigen::MatrixXd DiracFrame::p(std::span<const double> x) const {
  Eigen::MatrixXd m(dim_, rank());
  for (int a = 0; a < rank(); ++a) {
    auto v = sections_[a].xi.values(x);
    for (int i = 0; i < dim_; ++i) m(i, a) = v[i];
  }
  return m;
}

std::vector<Jet> DiracFrame::q_jets(std::span<const double> x, int order) const {
  const int k = rank();
  std::vector<Jet> out(dim_ * k);
  for (int a = 0; a < k; ++a) {
    auto v = sections_[a].X.jets(x, order);
    for (int i = 0; i < dim_; ++i) out[i * k + a] = std::move(v[i]);
  }
  return out;
}

std::vector<Jet> DiracFrame::p_jets(std::span<const double> x, int order) const {
  const int k = rank();
  std::vector<Jet> out(dim_ * k);
  for (int a = 0; a < k; ++a) {
    auto v = sections_[a].xi.jets(x, order);
    for (int i = 0; i < dim_; ++i) out[i * k + a] = std::move(v[i]);
  }
  return out;
}

const GeneralizedSection& DiracFrame::bracket(int a, int b) const {
  const int k = rank();
  require(0 <= a && a < b && b < k, ErrorCode::invalid_argument, "bracket needs a < b < k");
  // row-major upper triangle
  const int offset = a * k - a * (a + 1) / 2 + (b - a - 1);
  return brackets_[offset];
}

StructureFunctions structure_functions(const DiracFrame& frame, std::span<const double> x) {
  const int k = frame.rank();
  Eigen::MatrixXd A = stacked(frame, x);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  require(s[k - 1] > 1e-10 * std::max(1.0, s[0]), ErrorCode::rank_deficient,
          "frame is rank deficient at the evaluation point");
  StructureFunctions out;
  out.k = k;
  out.C.assign(k * k * k, 0.0);
  for (int a = 0; a < k; ++a) {
    for (int b = a + 1; b < k; ++b) {
      Eigen::VectorXd rhs = stacked(frame.bracket(a, b), x);
      Eigen::VectorXd c = svd.solve(rhs);
      out.offspan_residual = std::max(out.offspan_residual, (A * c - rhs).norm());
      for (int g = 0; g < k; ++g) {
        out.C[(g * k + a) * k + b] = c[g];
        out.C[(g * k + b) * k + a] = -c[g];
      }
    }
  }
  return out;
}

std::vector<SmoothField> structure_function_fields(const DiracFrame& frame, double step) {
  const int k = frame.rank();
  std::vector<SmoothField> out;
  for (int idx = 0; idx < k * k * k; ++idx) {
    out.push_back(SmoothField::from_values(
        FieldKind::scalar, frame.dim(),
        [frame, idx](std::span<const double> x) {
          return std::vector<double>{structure_functions(frame, x).C[idx]};
        },
        step));
  }
  return out;
}

double isotropy_residual(const DiracFrame& frame, const std::vector<std::vector<double>>& points) {
  double worst = 0.0;
  for (const auto& x : points) {
    Eigen::MatrixXd q = frame.q(x), p = frame.p(x);
    Eigen::MatrixXd G = q.transpose() * p;
    worst = std::max(worst, (G + G.transpose()).cwiseAbs().maxCoeff());
  }
  return worst;
}

double involutivity_residual(const DiracFrame& frame, const std::vector<std::vector<double>>& points) {
  if (frame.rank() < 2) return 0.0;
  double worst = 0.0;
  for (const auto& x : points) worst = std::max(worst, structure_functions(frame, x).offspan_residual);
  return worst;
}

double coordinate_identity_residual(const DiracFrame& frame,
                                    const std::vector<std::vector<double>>& points) {
  const int n = frame.dim(), k = frame.rank();
  double worst = 0.0;
  for (const auto& x : points) {
    auto C = structure_functions(frame, x);
    auto qj = frame.q_jets(x, 1);
    auto pj = frame.p_jets(x, 1);
    auto q = [&](int i, int a) { return qj[i * k + a].value(); };
    auto p = [&](int i, int a) { return pj[i * k + a].value(); };
    auto dq = [&](int d, int i, int a) { return qj[i * k + a].first(d); };
    auto dp = [&](int d, int i, int a) { return pj[i * k + a].first(d); };
    std::vector<double> H;
    if (!frame.twist().is_zero()) H = frame.twist().H().values(x);
    for (int a = 0; a < k; ++a) {
      for (int b = a + 1; b < k; ++b) {
        for (int i = 0; i < n; ++i) {
          double lhs = 0.0;
          for (int g = 0; g < k; ++g) lhs += C(g, a, b) * p(i, g);
          double rhs = 0.0;
          for (int j = 0; j < n; ++j) {
            rhs += q(j, a) * dp(j, i, b) - q(j, b) * dp(j, i, a) + p(j, b) * dq(i, j, a) +
                   q(j, b) * dp(i, j, a);
            if (!H.empty())
              for (int l = 0; l < n; ++l) rhs += H[(j * n + l) * n + i] * q(j, a) * q(l, b);
          }
          worst = std::max(worst, std::abs(lhs - rhs));
        }
      }
    }
  }
  return worst;
}

}  // namespace courant
