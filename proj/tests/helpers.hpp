#pragma once

#include <random>
#include <vector>

#include "courant/calculus.hpp"
#include "courant/field.hpp"

namespace testing_util {

using courant::FieldKind;
using courant::PolyTerm;
using courant::SmoothField;

inline SmoothField poly(FieldKind kind, int dim, std::vector<PolyTerm> terms) {
  return SmoothField::polynomial(kind, dim, terms);
}

// x^monomial placed on `slots`, coefficient c.
inline PolyTerm term(double c, std::vector<int> monomial, std::vector<int> slots) {
  return PolyTerm{c, std::move(monomial), std::move(slots)};
}

// Random polynomial field of total degree <= max_degree: a handful of terms
// with increasing slot tuples.
inline SmoothField random_poly(FieldKind kind, int dim, int max_degree, std::mt19937_64& rng,
                               int terms = 6) {
  std::uniform_real_distribution<double> c(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, dim - 1);
  std::uniform_int_distribution<int> deg(0, max_degree);
  const int rank = courant::tensor_rank(kind);
  const bool alternating = kind != FieldKind::vector && kind != FieldKind::one_form &&
                           kind != FieldKind::scalar;
  std::vector<PolyTerm> out;
  for (int t = 0; t < terms; ++t) {
    std::vector<int> mono(dim, 0);
    for (int d = deg(rng); d > 0; --d) ++mono[var(rng)];
    std::vector<int> slots;
    if (alternating) {
      std::vector<int> pick(dim);
      for (int i = 0; i < dim; ++i) pick[i] = i;
      std::shuffle(pick.begin(), pick.end(), rng);
      slots.assign(pick.begin(), pick.begin() + rank);
      std::sort(slots.begin(), slots.end());
    } else {
      for (int r = 0; r < rank; ++r) slots.push_back(var(rng));
    }
    out.push_back({c(rng), mono, slots});
  }
  return SmoothField::polynomial(kind, dim, out);
}

inline double sup(const SmoothField& f, int dim, std::uint64_t seed = 17, int count = 40) {
  return courant::sup_norm(f, courant::sample_points(dim, count, seed));
}

}  // namespace testing_util
