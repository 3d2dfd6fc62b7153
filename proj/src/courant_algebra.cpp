#include "courant/courant_algebra.hpp"

#include <cmath>

#include "courant/calculus.hpp"
#include "courant/error.hpp"

namespace courant {

GeneralizedSection::GeneralizedSection(SmoothField X_, SmoothField xi_)
    : X(std::move(X_)), xi(std::move(xi_)) {
  require(X.kind() == FieldKind::vector, ErrorCode::shape_mismatch,
          "vector part of a section must be a vector field");
  require(xi.kind() == FieldKind::one_form, ErrorCode::shape_mismatch,
          "form part of a section must be a one-form");
  require(X.dim() == xi.dim(), ErrorCode::dimension_mismatch,
          "vector and form parts live on different charts");
}

GeneralizedSection GeneralizedSection::vector_part(SmoothField X) {
  const int n = X.dim();
  return GeneralizedSection(std::move(X), SmoothField::zero(FieldKind::one_form, n));
}

GeneralizedSection GeneralizedSection::form_part(SmoothField xi) {
  const int n = xi.dim();
  return GeneralizedSection(SmoothField::zero(FieldKind::vector, n), std::move(xi));
}

TwistClass::TwistClass(SmoothField H, bool zero) : H_(std::move(H)), zero_(zero) {}

TwistClass TwistClass::none(int dim) {
  return TwistClass(SmoothField::zero(FieldKind::three_form, dim), true);
}

TwistClass::TwistClass(SmoothField H, double closed_tol) : H_(std::move(H)) {
  require(H_.kind() == FieldKind::three_form, ErrorCode::shape_mismatch,
          "a twist must be a three-form");
  dH_residual_ = sup_norm(exterior_derivative(H_), sample_points(H_.dim(), 20, 0x7157));
  closed_ = dH_residual_ < closed_tol;
}

double pairing(const GeneralizedSection& a, const GeneralizedSection& b, std::span<const double> x) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "sections live on different charts");
  auto Xa = a.X.values(x), xa = a.xi.values(x), Xb = b.X.values(x), xb = b.xi.values(x);
  double acc = 0.0;
  for (int i = 0; i < a.dim(); ++i) acc += xb[i] * Xa[i] + xa[i] * Xb[i];
  return acc;
}

SmoothField pairing_field(const GeneralizedSection& a, const GeneralizedSection& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "sections live on different charts");
  const int n = a.dim();
  return SmoothField(FieldKind::scalar, n, [a, b, n](std::span<const double> x, int order) {
    auto Xa = a.X.jets(x, order), xa = a.xi.jets(x, order);
    auto Xb = b.X.jets(x, order), xb = b.xi.jets(x, order);
    Jet out(n, order);
    for (int i = 0; i < n; ++i) {
      out.add_product(xb[i], Xa[i]);
      out.add_product(xa[i], Xb[i]);
    }
    return std::vector<Jet>{out};
  });
}

GeneralizedSection courant_bracket(const GeneralizedSection& a, const GeneralizedSection& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "sections live on different charts");
  return GeneralizedSection(
      lie_bracket(a.X, b.X),
      lie_derivative_form(a.X, b.xi) - interior_product(b.X, exterior_derivative(a.xi)));
}

GeneralizedSection twisted_bracket(const GeneralizedSection& a, const GeneralizedSection& b,
                                   const TwistClass& tw) {
  require(a.dim() == tw.dim(), ErrorCode::dimension_mismatch, "twist lives on a different chart");
  auto plain = courant_bracket(a, b);
  if (tw.is_zero()) return plain;
  // twist term i_X2 i_X1 H = H(X1, X2, .)
  return GeneralizedSection(plain.X, plain.xi + interior_product(b.X, interior_product(a.X, tw.H())));
}

GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b) {
  return GeneralizedSection(a.X + b.X, a.xi + b.xi);
}

GeneralizedSection operator-(const GeneralizedSection& a, const GeneralizedSection& b) {
  return GeneralizedSection(a.X - b.X, a.xi - b.xi);
}

double section_norm(const GeneralizedSection& s, std::span<const double> x) {
  double acc = 0.0;
  for (double v : s.X.values(x)) acc += v * v;
  for (double v : s.xi.values(x)) acc += v * v;
  return std::sqrt(acc);
}

double jacobi_residual(const GeneralizedSection& a, const GeneralizedSection& b,
                       const GeneralizedSection& c, const TwistClass& tw, std::span<const double> x) {
  auto br = [&tw](const GeneralizedSection& u, const GeneralizedSection& v) {
    return twisted_bracket(u, v, tw);
  };
  auto lhs = br(a, br(b, c));
  auto rhs = br(br(a, b), c) + br(b, br(a, c));
  return section_norm(lhs - rhs, x);
}

}  // namespace courant
