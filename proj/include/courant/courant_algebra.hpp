#pragma once

#include <span>

#include "courant/field.hpp"

namespace courant {

/// A section X + xi of TM + T*M.
struct GeneralizedSection {
  SmoothField X;
  SmoothField xi;

  GeneralizedSection(SmoothField X, SmoothField xi);
  static GeneralizedSection vector_part(SmoothField X);
  static GeneralizedSection form_part(SmoothField xi);
  int dim() const { return X.dim(); }
};

/// A 3-form twist. `closed()` records whether dH vanished at sampled points.
class TwistClass {
 public:
  static TwistClass none(int dim);
  explicit TwistClass(SmoothField H, double closed_tol = 1e-9);

  const SmoothField& H() const { return H_; }
  bool closed() const { return closed_; }
  bool is_zero() const { return zero_; }
  /// max |dH| over the sampled points used for the closed flag.
  double closedness_residual() const { return dH_residual_; }
  int dim() const { return H_.dim(); }

 private:
  TwistClass(SmoothField H, bool zero);
  SmoothField H_;
  bool closed_ = true;
  bool zero_ = false;
  double dH_residual_ = 0.0;
};

/// <a, b> = xi_b(X_a) + xi_a(X_b) at x.
double pairing(const GeneralizedSection& a, const GeneralizedSection& b, std::span<const double> x);
/// The pairing as a scalar field.
SmoothField pairing_field(const GeneralizedSection& a, const GeneralizedSection& b);

/// ([X1,X2], L_X1 xi2 - i_X2 d xi1).
GeneralizedSection courant_bracket(const GeneralizedSection& a, const GeneralizedSection& b);

/// Courant bracket plus the twist H(X1, X2, .). With a zero twist the result
/// is the untwisted bracket itself.
GeneralizedSection twisted_bracket(const GeneralizedSection& a, const GeneralizedSection& b,
                                   const TwistClass& tw);

/// Euclidean norm at x of [a,[b,c]] - [[a,b],c] - [b,[a,c]] (twisted).
double jacobi_residual(const GeneralizedSection& a, const GeneralizedSection& b,
                       const GeneralizedSection& c, const TwistClass& tw, std::span<const double> x);

/// Euclidean norm of a section's components at x.
double section_norm(const GeneralizedSection& s, std::span<const double> x);

GeneralizedSection operator+(const GeneralizedSection& a, const GeneralizedSection& b);
GeneralizedSection operator-(const GeneralizedSection& a, const GeneralizedSection& b);

}  // namespace courant
