#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

namespace courant {

/// Monomial bookkeeping for jets in `dim` variables truncated at total degree
/// `order`. Tables are shared and immutable once built.
struct MonomialTable {
  int dim = 0;
  int order = 0;
  std::vector<std::vector<int>> exponents;  // graded order, index 0 is the constant
  std::vector<int> degree;
  // product[k] lists (a, b) with exponents[a] + exponents[b] == exponents[k]
  std::vector<std::vector<std::pair<int, int>>> product;
  // shift[j][a]: index of exponents[a] + e_j, or -1 if above order
  std::vector<std::vector<int>> shift;

  int index_of(std::span<const int> alpha) const;

  static std::shared_ptr<const MonomialTable> get(int dim, int order);
};

/// Truncated multivariate Taylor expansion about a point. Coefficients are
/// stored as c_alpha = (d^alpha f) / alpha!.
class Jet {
 public:
  Jet() = default;
  Jet(int dim, int order);
  static Jet constant(int dim, int order, double value);
  /// The coordinate function x_j expanded about a point whose j-th coordinate is `at`.
  static Jet coordinate(int dim, int order, int j, double at);

  int dim() const { return table_->dim; }
  int order() const { return table_->order; }
  const MonomialTable& table() const { return *table_; }

  double value() const { return coeffs_[0]; }
  double first(int j) const;
  /// Partial derivative d^alpha at the expansion point.
  double partial(std::span<const int> alpha) const;

  std::span<const double> coeffs() const { return coeffs_; }
  std::span<double> coeffs() { return coeffs_; }

  /// d/dx_j, order drops by one.
  Jet derivative(int j) const;
  /// Same expansion, fewer terms.
  Jet truncate(int order) const;

  Jet& operator+=(const Jet& o);
  Jet& operator-=(const Jet& o);
  Jet& operator*=(double s);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b);
  Jet operator-() const { return *this * -1.0; }

  /// this += a * b, truncated. Avoids a temporary in hot loops.
  void add_product(const Jet& a, const Jet& b, double scale = 1.0);

 private:
  std::shared_ptr<const MonomialTable> table_;
  std::vector<double> coeffs_;
};

}  // namespace courant
