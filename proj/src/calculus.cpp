#include "courant/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "courant/error.hpp"

namespace courant {

namespace {

DerivativeMode merged_mode(const SmoothField& a, const SmoothField& b) {
  return (a.mode() == DerivativeMode::finite_difference ||
          b.mode() == DerivativeMode::finite_difference)
             ? DerivativeMode::finite_difference
             : DerivativeMode::analytic;
}

// Decodes a flat row-major offset into `rank` indices.
void unflatten(std::size_t k, int dim, int rank, std::vector<int>& idx) {
  idx.resize(rank);
  for (int a = rank - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(k % dim);
    k /= dim;
  }
}

std::size_t count(int dim, int rank) {
  std::size_t r = 1;
  for (int i = 0; i < rank; ++i) r *= dim;
  return r;
}

void require_same_chart(const SmoothField& a, const SmoothField& b) {
  require(a.dim() == b.dim(), ErrorCode::dimension_mismatch,
          "fields live on charts of dimension " + std::to_string(a.dim()) + " and " +
              std::to_string(b.dim()));
}

void require_vector(const SmoothField& X) {
  require(X.kind() == FieldKind::vector, ErrorCode::shape_mismatch,
          std::string("expected a vector field, got ") + kind_name(X.kind()));
}

}  // namespace

SmoothField exterior_derivative(const SmoothField& form) {
  const int k = form_degree(form.kind());
  require(k >= 0 && k <= 3, ErrorCode::degree,
          std::string("exterior derivative of a ") + kind_name(form.kind()) + " is not supported");
  const int n = form.dim();
  const FieldKind out_kind = form_kind(k + 1);
  return SmoothField(
      out_kind, n,
      [form, n, k](std::span<const double> x, int order) {
        auto w = form.jets(x, order + 1);
        // dw[j][c] = d_j w_c
        std::vector<std::vector<Jet>> dw(n);
        for (int j = 0; j < n; ++j) {
          dw[j].reserve(w.size());
          for (const auto& c : w) dw[j].push_back(c.derivative(j));
        }
        std::vector<Jet> out(count(n, k + 1), Jet(n, order));
        std::vector<int> idx, rest(k);
        for (std::size_t o = 0; o < out.size(); ++o) {
          unflatten(o, n, k + 1, idx);
          for (int a = 0; a <= k; ++a) {
            for (int b = 0, r = 0; b <= k; ++b)
              if (b != a) rest[r++] = idx[b];
            const Jet& term = dw[idx[a]][flat_index(n, rest)];
            if (a % 2) out[o] -= term;
            else out[o] += term;
          }
        }
        return out;
      },
      form.mode(), form.step());
}

SmoothField interior_product(const SmoothField& X, const SmoothField& form) {
  require_vector(X);
  require_same_chart(X, form);
  const int k = form_degree(form.kind());
  require(k >= 1, ErrorCode::degree,
          std::string("interior product needs a form of degree >= 1, got ") + kind_name(form.kind()));
  const int n = form.dim();
  return SmoothField(
      form_kind(k - 1), n,
      [X, form, n, k](std::span<const double> x, int order) {
        auto xv = X.jets(x, order);
        auto w = form.jets(x, order);
        const std::size_t stride = count(n, k - 1);
        std::vector<Jet> out(stride, Jet(n, order));
        for (std::size_t o = 0; o < stride; ++o)
          for (int i = 0; i < n; ++i) out[o].add_product(xv[i], w[i * stride + o]);
        return out;
      },
      merged_mode(X, form), std::max(X.step(), form.step()));
}

SmoothField lie_bracket(const SmoothField& X, const SmoothField& Y) {
  require_vector(X);
  require_vector(Y);
  require_same_chart(X, Y);
  const int n = X.dim();
  return SmoothField(
      FieldKind::vector, n,
      [X, Y, n](std::span<const double> x, int order) {
        auto xv = X.jets(x, order + 1);
        auto yv = Y.jets(x, order + 1);
        std::vector<Jet> out(n, Jet(n, order));
        for (int j = 0; j < n; ++j) {
          for (int i = 0; i < n; ++i) {
            out[i].add_product(xv[j], yv[i].derivative(j));
            out[i].add_product(yv[j], xv[i].derivative(j), -1.0);
          }
        }
        return out;
      },
      merged_mode(X, Y), std::max(X.step(), Y.step()));
}

SmoothField lie_derivative_form(const SmoothField& X, const SmoothField& form) {
  require_vector(X);
  require_same_chart(X, form);
  const int k = form_degree(form.kind());
  require(k >= 0 && k <= 2, ErrorCode::degree,
          std::string("Lie derivative of a ") + kind_name(form.kind()) + " is not supported");
  SmoothField first = interior_product(X, exterior_derivative(form));
  if (k == 0) return first;
  return first + exterior_derivative(interior_product(X, form));
}

SmoothField lie_derivative_coordinate(const SmoothField& X, const SmoothField& form) {
  require_vector(X);
  require_same_chart(X, form);
  const int k = form_degree(form.kind());
  require(k >= 0 && k <= 3, ErrorCode::degree,
          std::string("Lie derivative of a ") + kind_name(form.kind()) + " is not supported");
  const int n = form.dim();
  return SmoothField(
      form.kind(), n,
      [X, form, n, k](std::span<const double> x, int order) {
        auto xv = X.jets(x, order + 1);
        auto w = form.jets(x, order + 1);
        std::vector<Jet> out(w.size(), Jet(n, order));
        std::vector<int> idx, moved;
        for (std::size_t o = 0; o < w.size(); ++o) {
          unflatten(o, n, k, idx);
          for (int j = 0; j < n; ++j) out[o].add_product(xv[j], w[o].derivative(j));
          for (int a = 0; a < k; ++a) {
            moved = idx;
            for (int j = 0; j < n; ++j) {
              moved[a] = j;
              out[o].add_product(w[flat_index(n, moved)], xv[j].derivative(idx[a]));
            }
          }
        }
        return out;
      },
      merged_mode(X, form), std::max(X.step(), form.step()));
}

double sup_norm(const SmoothField& f, const std::vector<std::vector<double>>& points) {
  double worst = 0.0;
  for (const auto& p : points)
    for (double v : f.values(p)) worst = std::max(worst, std::abs(v));
  return worst;
}

std::vector<std::vector<double>> sample_points(int dim, int count, std::uint64_t seed, double lo,
                                               double hi) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<std::vector<double>> out(count, std::vector<double>(dim));
  for (auto& p : out)
    for (double& c : p) c = u(rng);
  return out;
}

}  // namespace courant
