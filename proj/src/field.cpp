#include "courant/field.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "courant/error.hpp"

namespace courant {

int tensor_rank(FieldKind kind) {
  switch (kind) {
    case FieldKind::scalar: return 0;
    case FieldKind::vector:
    case FieldKind::one_form: return 1;
    case FieldKind::two_form:
    case FieldKind::bivector: return 2;
    case FieldKind::three_form: return 3;
    case FieldKind::four_form: return 4;
  }
  return 0;
}

int form_degree(FieldKind kind) {
  switch (kind) {
    case FieldKind::vector:
    case FieldKind::bivector: return -1;
    default: return tensor_rank(kind);
  }
}

FieldKind form_kind(int degree) {
  switch (degree) {
    case 0: return FieldKind::scalar;
    case 1: return FieldKind::one_form;
    case 2: return FieldKind::two_form;
    case 3: return FieldKind::three_form;
    case 4: return FieldKind::four_form;
    default: fail(ErrorCode::degree, "unsupported form degree " + std::to_string(degree));
  }
}

const char* kind_name(FieldKind kind) {
  switch (kind) {
    case FieldKind::scalar: return "scalar";
    case FieldKind::vector: return "vector";
    case FieldKind::one_form: return "one-form";
    case FieldKind::two_form: return "two-form";
    case FieldKind::three_form: return "three-form";
    case FieldKind::four_form: return "four-form";
    case FieldKind::bivector: return "bivector";
  }
  return "?";
}

std::size_t flat_index(int dim, std::span<const int> idx) {
  std::size_t k = 0;
  for (int i : idx) k = k * dim + i;
  return k;
}

namespace {

std::size_t ipow(int base, int e) {
  std::size_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

bool antisymmetric_kind(FieldKind kind) { return tensor_rank(kind) >= 2; }

// All permutations of `slots` with their signs.
std::vector<std::pair<std::vector<int>, int>> signed_permutations(std::vector<int> slots) {
  std::vector<std::pair<std::vector<int>, int>> out;
  std::vector<int> order(slots.size());
  std::iota(order.begin(), order.end(), 0);
  do {
    int inversions = 0;
    for (std::size_t a = 0; a < order.size(); ++a)
      for (std::size_t b = a + 1; b < order.size(); ++b)
        if (order[a] > order[b]) ++inversions;
    std::vector<int> p(slots.size());
    for (std::size_t a = 0; a < order.size(); ++a) p[a] = slots[order[a]];
    out.emplace_back(std::move(p), inversions % 2 ? -1 : 1);
  } while (std::next_permutation(order.begin(), order.end()));
  return out;
}

struct PlacedTerm {
  double coeff;
  std::vector<int> monomial;
  std::vector<std::pair<std::size_t, int>> targets;  // flat index, sign
};

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SmoothField::SmoothField(FieldKind kind, int dim, JetEvaluator eval, DerivativeMode mode,
                         double step)
    : kind_(kind),
      dim_(dim),
      size_(ipow(dim, tensor_rank(kind))),
      mode_(mode),
      step_(step),
      eval_(std::make_shared<const JetEvaluator>(std::move(eval))) {
  require(dim >= 1, ErrorCode::invalid_argument, "field dimension must be positive");
}

std::vector<Jet> SmoothField::jets(std::span<const double> x, int order) const {
  require(static_cast<int>(x.size()) == dim_, ErrorCode::dimension_mismatch,
          "point has length " + std::to_string(x.size()) + ", field dimension is " +
              std::to_string(dim_));
  for (double c : x) require(std::isfinite(c), ErrorCode::invalid_argument, "non-finite point");
  auto out = (*eval_)(x, order);
  require(out.size() == size_, ErrorCode::shape_mismatch, "evaluator returned wrong component count");
  return out;
}

std::vector<double> SmoothField::values(std::span<const double> x) const {
  auto j = jets(x, 0);
  std::vector<double> out(j.size());
  for (std::size_t k = 0; k < j.size(); ++k) out[k] = j[k].value();
  return out;
}

SmoothField SmoothField::polynomial(FieldKind kind, int dim, const std::vector<PolyTerm>& terms) {
  const int rank = tensor_rank(kind);
  std::vector<PlacedTerm> placed;
  int max_exp = 0;
  for (const auto& t : terms) {
    require(static_cast<int>(t.monomial.size()) == dim, ErrorCode::dimension_mismatch,
            "monomial length does not match dimension");
    require(static_cast<int>(t.slots.size()) == rank, ErrorCode::shape_mismatch,
            std::string("a ") + kind_name(kind) + " term needs " + std::to_string(rank) + " slot(s)");
    for (int e : t.monomial) {
      require(e >= 0, ErrorCode::invalid_argument, "negative exponent");
      max_exp = std::max(max_exp, e);
    }
    for (int s : t.slots)
      require(s >= 0 && s < dim, ErrorCode::invalid_argument, "slot index out of range");
    PlacedTerm p{t.coeff, t.monomial, {}};
    if (antisymmetric_kind(kind)) {
      auto sorted = t.slots;
      std::sort(sorted.begin(), sorted.end());
      require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
              ErrorCode::invalid_argument, "repeated slot in an antisymmetric term");
      for (auto& [perm, sign] : signed_permutations(t.slots))
        p.targets.emplace_back(flat_index(dim, perm), sign);
    } else {
      p.targets.emplace_back(flat_index(dim, t.slots), 1);
    }
    placed.push_back(std::move(p));
  }
  const std::size_t size = ipow(dim, rank);
  auto eval = [placed, dim, size, max_exp](std::span<const double> x, int order) {
    // powers[j][e] = x_j^e as jets
    std::vector<std::vector<Jet>> powers(dim);
    for (int j = 0; j < dim; ++j) {
      powers[j].push_back(Jet::constant(dim, order, 1.0));
      Jet xj = Jet::coordinate(dim, order, j, x[j]);
      for (int e = 1; e <= max_exp; ++e) powers[j].push_back(powers[j].back() * xj);
    }
    std::vector<Jet> out(size, Jet(dim, order));
    for (const auto& t : placed) {
      Jet m = Jet::constant(dim, order, t.coeff);
      for (int j = 0; j < dim; ++j)
        if (t.monomial[j] > 0) m = m * powers[j][t.monomial[j]];
      for (auto [k, sign] : t.targets) {
        if (sign > 0) out[k] += m;
        else out[k] -= m;
      }
    }
    return out;
  };
  SmoothField f(kind, dim, eval);
  require(antisymmetry_defect(f) < 1e-12, ErrorCode::shape_mismatch,
          "polynomial field components are not antisymmetric");
  return f;
}

SmoothField SmoothField::zero(FieldKind kind, int dim) {
  const std::size_t size = ipow(dim, tensor_rank(kind));
  return SmoothField(kind, dim, [dim, size](std::span<const double>, int order) {
    return std::vector<Jet>(size, Jet(dim, order));
  });
}

SmoothField SmoothField::constant(FieldKind kind, int dim, std::vector<double> components) {
  require(components.size() == ipow(dim, tensor_rank(kind)), ErrorCode::shape_mismatch,
          "constant field has wrong component count");
  SmoothField f(kind, dim, [dim, components](std::span<const double>, int order) {
    std::vector<Jet> out;
    out.reserve(components.size());
    for (double c : components) out.push_back(Jet::constant(dim, order, c));
    return out;
  });
  require(antisymmetry_defect(f) == 0.0, ErrorCode::shape_mismatch,
          "constant field components are not antisymmetric");
  return f;
}

SmoothField SmoothField::from_values(FieldKind kind, int dim, ValueEvaluator values, double step) {
  require(step > 0.0, ErrorCode::invalid_argument, "finite-difference step must be positive");
  auto eval = [values = std::move(values), dim, step](std::span<const double> x, int order) {
    const auto table = MonomialTable::get(dim, order);
    std::vector<double> base(x.begin(), x.end());
    const std::size_t size = values(base).size();
    std::vector<Jet> out(size, Jet(dim, order));
    std::vector<double> acc(size);
    std::vector<double> point(dim);
    for (std::size_t a = 0; a < table->exponents.size(); ++a) {
      const auto& alpha = table->exponents[a];
      // tensor product of centered stencils: offsets (m - alpha_j/2) h, weights
      // (-1)^(alpha_j - m) C(alpha_j, m) / h^alpha_j; divide by alpha! for the
      // Taylor coefficient
      std::fill(acc.begin(), acc.end(), 0.0);
      std::vector<int> m(dim, 0);
      double norm = 1.0;
      for (int j = 0; j < dim; ++j)
        for (int i = 2; i <= alpha[j]; ++i) norm *= i;
      for (int j = 0; j < dim; ++j) norm *= std::pow(step, alpha[j]);
      while (true) {
        double w = 1.0;
        for (int j = 0; j < dim; ++j) {
          w *= binomial(alpha[j], m[j]) * (((alpha[j] - m[j]) % 2) ? -1.0 : 1.0);
          point[j] = x[j] + (m[j] - 0.5 * alpha[j]) * step;
        }
        auto vals = values(point);
        for (std::size_t k = 0; k < size; ++k) acc[k] += w * vals[k];
        int j = 0;
        while (j < dim && ++m[j] > alpha[j]) m[j++] = 0;
        if (j == dim) break;
      }
      for (std::size_t k = 0; k < size; ++k) out[k].coeffs()[a] = acc[k] / norm;
    }
    return out;
  };
  SmoothField f(kind, dim, eval, DerivativeMode::finite_difference, step);
  require(f.values(std::vector<double>(dim, 0.0)).size() == f.size(), ErrorCode::shape_mismatch,
          "value evaluator returned wrong component count");
  require(antisymmetry_defect(f) < 1e-12, ErrorCode::shape_mismatch,
          "field components are not antisymmetric");
  return f;
}

SmoothField SmoothField::with_finite_differences(double step) const {
  SmoothField self = *this;
  return from_values(kind_, dim_, [self](std::span<const double> x) { return self.values(x); },
                     step);
}

namespace {

SmoothField combine(const SmoothField& a, const SmoothField& b, double sb) {
  require(a.kind() == b.kind(), ErrorCode::shape_mismatch, "field kinds differ");
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch, "field dimensions differ");
  auto mode = (a.mode() == DerivativeMode::finite_difference ||
               b.mode() == DerivativeMode::finite_difference)
                  ? DerivativeMode::finite_difference
                  : DerivativeMode::analytic;
  return SmoothField(
      a.kind(), a.dim(),
      [a, b, sb](std::span<const double> x, int order) {
        auto out = a.jets(x, order);
        auto jb = b.jets(x, order);
        for (std::size_t k = 0; k < out.size(); ++k) {
          jb[k] *= sb;
          out[k] += jb[k];
        }
        return out;
      },
      mode, std::max(a.step(), b.step()));
}

}  // namespace

SmoothField operator+(const SmoothField& a, const SmoothField& b) { return combine(a, b, 1.0); }
SmoothField operator-(const SmoothField& a, const SmoothField& b) { return combine(a, b, -1.0); }

SmoothField operator*(double s, const SmoothField& a) {
  return SmoothField(
      a.kind(), a.dim(),
      [a, s](std::span<const double> x, int order) {
        auto out = a.jets(x, order);
        for (auto& j : out) j *= s;
        return out;
      },
      a.mode(), a.step());
}

double antisymmetry_defect(const SmoothField& f, std::uint64_t seed, int points) {
  const int rank = f.rank();
  if (rank < 2) return 0.0;
  const int n = f.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst = 0.0;
  std::vector<double> x(n);
  std::vector<int> idx(rank), swapped(rank);
  for (int p = 0; p < points; ++p) {
    for (double& c : x) c = u(rng);
    auto vals = f.values(x);
    for (std::size_t k = 0; k < vals.size(); ++k) {
      std::size_t r = k;
      for (int a = rank - 1; a >= 0; --a) {
        idx[a] = static_cast<int>(r % n);
        r /= n;
      }
      for (int a = 0; a + 1 < rank; ++a) {
        swapped = idx;
        std::swap(swapped[a], swapped[a + 1]);
        worst = std::max(worst, std::abs(vals[k] + vals[flat_index(n, swapped)]));
      }
    }
  }
  return worst;
}

}  // namespace courant
