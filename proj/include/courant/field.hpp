#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "courant/jet.hpp"

namespace courant {

enum class FieldKind { scalar, vector, one_form, two_form, three_form, four_form, bivector };

/// Number of tensor indices carried by a component array.
int tensor_rank(FieldKind kind);
/// Form degree, or -1 for vector fields and bivectors.
int form_degree(FieldKind kind);
FieldKind form_kind(int degree);
const char* kind_name(FieldKind kind);

enum class DerivativeMode { analytic, finite_difference };

/// One term of a sparse polynomial field: coeff * x^monomial, placed on the
/// index tuple `slots` (0-based) and antisymmetrized for forms and bivectors.
/// A two-form term with slots {0,1} is coeff * dx^1 ^ dx^2.
struct PolyTerm {
  double coeff = 0.0;
  std::vector<int> monomial;
  std::vector<int> slots;
};

/// Returns component jets (row-major over tensor indices) about a point.
using JetEvaluator = std::function<std::vector<Jet>(std::span<const double>, int)>;
/// Returns plain component values at a point.
using ValueEvaluator = std::function<std::vector<double>(std::span<const double>)>;

/// A chart-level tensor field on R^n. Copies share the evaluator.
class SmoothField {
 public:
  SmoothField(FieldKind kind, int dim, JetEvaluator eval,
              DerivativeMode mode = DerivativeMode::analytic, double step = 0.0);

  static SmoothField polynomial(FieldKind kind, int dim, const std::vector<PolyTerm>& terms);
  static SmoothField zero(FieldKind kind, int dim);
  static SmoothField constant(FieldKind kind, int dim, std::vector<double> components);
  /// Finite-difference field: derivatives come from nested central differences.
  static SmoothField from_values(FieldKind kind, int dim, ValueEvaluator values,
                                 double step = 1e-5);

  /// Same values, derivatives recomputed by central differences of step `step`.
  SmoothField with_finite_differences(double step = 1e-5) const;

  FieldKind kind() const { return kind_; }
  int dim() const { return dim_; }
  int rank() const { return tensor_rank(kind_); }
  std::size_t size() const { return size_; }
  DerivativeMode mode() const { return mode_; }
  double step() const { return step_; }

  std::vector<Jet> jets(std::span<const double> x, int order) const;
  std::vector<double> values(std::span<const double> x) const;

 private:
  FieldKind kind_;
  int dim_;
  std::size_t size_;
  DerivativeMode mode_;
  double step_;
  std::shared_ptr<const JetEvaluator> eval_;
};

SmoothField operator+(const SmoothField& a, const SmoothField& b);
SmoothField operator-(const SmoothField& a, const SmoothField& b);
SmoothField operator*(double s, const SmoothField& a);

/// Flat row-major offset of a tensor index tuple.
std::size_t flat_index(int dim, std::span<const int> idx);

/// Largest |T + T^sigma| over transpositions at a few seeded points in [-1,1]^n;
/// zero for non-antisymmetric kinds.
double antisymmetry_defect(const SmoothField& f, std::uint64_t seed = 7, int points = 4);

}  // namespace courant
