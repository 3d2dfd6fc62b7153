#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "courant/calculus.hpp"
#include "courant/error.hpp"
#include "courant/quadrature.hpp"
#include "helpers.hpp"

using namespace courant;
using namespace testing_util;

namespace {

std::vector<double> at(const SmoothField& f, std::vector<double> x) { return f.values(x); }

}  // namespace

TEST(Jet, ProductAndDerivativeOfCoordinates) {
  const Jet x = Jet::coordinate(2, 3, 0, 0.5);
  const Jet y = Jet::coordinate(2, 3, 1, -2.0);
  const Jet f = x * x * y;  // x^2 y
  EXPECT_DOUBLE_EQ(f.value(), -0.5);
  EXPECT_DOUBLE_EQ(f.first(0), 2 * 0.5 * -2.0);
  EXPECT_DOUBLE_EQ(f.first(1), 0.25);
  const int xx[] = {2, 0}, xy[] = {1, 1}, xxy[] = {2, 1};
  EXPECT_DOUBLE_EQ(f.partial(xx), 2 * -2.0);
  EXPECT_DOUBLE_EQ(f.partial(xy), 2 * 0.5);
  EXPECT_DOUBLE_EQ(f.partial(xxy), 2.0);
  const Jet fx = f.derivative(0);
  EXPECT_EQ(fx.order(), 2);
  EXPECT_DOUBLE_EQ(fx.value(), f.first(0));
  EXPECT_DOUBLE_EQ(fx.first(1), 2 * 0.5);
}

TEST(Jet, RejectsDerivativeBeyondOrder) {
  const Jet c = Jet::constant(2, 0, 1.0);
  EXPECT_THROW(c.derivative(0), Error);
  const Jet x = Jet::coordinate(2, 1, 0, 0.0);
  const int too_high[] = {2, 0};
  EXPECT_THROW(x.partial(too_high), Error);
}

TEST(Field, PolynomialValidation) {
  EXPECT_THROW(poly(FieldKind::two_form, 3, {term(1, {0, 0}, {0, 1})}), Error);
  EXPECT_THROW(poly(FieldKind::two_form, 3, {term(1, {0, 0, 0}, {0})}), Error);
  EXPECT_THROW(poly(FieldKind::two_form, 3, {term(1, {0, 0, 0}, {0, 3})}), Error);
  EXPECT_THROW(poly(FieldKind::two_form, 3, {term(1, {0, 0, 0}, {1, 1})}), Error);
  try {
    auto f = poly(FieldKind::one_form, 2, {term(1, {1, 0}, {0})});
    f.values(std::vector<double>{1.0, 2.0, 3.0});
    FAIL() << "expected a dimension mismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
}

TEST(Field, FiniteDifferenceDerivativesMatchAnalytic) {
  std::mt19937_64 rng(4);
  const SmoothField w = random_poly(FieldKind::one_form, 3, 3, rng);
  const SmoothField fd = w.with_finite_differences(1e-4);
  EXPECT_LT(sup(exterior_derivative(w) - exterior_derivative(fd), 3), 1e-7);
}

TEST(Calculus, DifferentialOfX2Dx1) {
  const auto w = poly(FieldKind::one_form, 3, {term(1, {0, 1, 0}, {0})});
  const auto dw = exterior_derivative(w);
  ASSERT_EQ(dw.kind(), FieldKind::two_form);
  for (auto x : sample_points(3, 5, 1)) {
    const auto v = dw.values(x);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double want = 0.0;
        if (i == 0 && j == 1) want = -1.0;
        if (i == 1 && j == 0) want = 1.0;
        EXPECT_DOUBLE_EQ(v[i * 3 + j], want);
      }
  }
}

TEST(Calculus, BracketExamples) {
  const auto x1d2 = poly(FieldKind::vector, 3, {term(1, {1, 0, 0}, {1})});
  const auto d1 = poly(FieldKind::vector, 3, {term(1, {0, 0, 0}, {0})});
  const auto br = lie_bracket(x1d2, d1);
  EXPECT_EQ(at(br, {0.3, -0.2, 0.9}), (std::vector<double>{0, -1, 0}));

  const auto x1d1 = poly(FieldKind::vector, 3, {term(1, {1, 0, 0}, {0})});
  const auto br2 = lie_bracket(x1d1, x1d2);
  for (auto x : sample_points(3, 5, 2)) {
    const auto v = br2.values(x);
    EXPECT_DOUBLE_EQ(v[0], 0.0);
    EXPECT_DOUBLE_EQ(v[1], x[0]);
    EXPECT_DOUBLE_EQ(v[2], 0.0);
  }
}

TEST(Calculus, LieDerivativeOfDx1AlongX2D1) {
  const auto X = poly(FieldKind::vector, 2, {term(1, {0, 1}, {0})});
  const auto dx1 = poly(FieldKind::one_form, 2, {term(1, {0, 0}, {0})});
  for (const auto& L : {lie_derivative_form(X, dx1), lie_derivative_coordinate(X, dx1)})
    EXPECT_EQ(at(L, {0.7, 0.1}), (std::vector<double>{0, 1}));
}

TEST(Calculus, ContractionOfVolumeForm) {
  const auto d2 = poly(FieldKind::vector, 3, {term(1, {0, 0, 0}, {1})});
  const auto vol = poly(FieldKind::three_form, 3, {term(1, {0, 0, 0}, {0, 1, 2})});
  const auto v = at(interior_product(d2, vol), {0, 0, 0});
  // dx3 ^ dx1: component (3,1) = +1.
  EXPECT_DOUBLE_EQ(v[2 * 3 + 0], 1.0);
  EXPECT_DOUBLE_EQ(v[0 * 3 + 2], -1.0);
  EXPECT_DOUBLE_EQ(v[0 * 3 + 1], 0.0);
  EXPECT_DOUBLE_EQ(v[1 * 3 + 2], 0.0);
}

TEST(Calculus, DSquaredVanishes) {
  std::mt19937_64 rng(11);
  for (int dim = 2; dim <= 4; ++dim)
    for (FieldKind k : {FieldKind::scalar, FieldKind::one_form, FieldKind::two_form}) {
      if (form_degree(k) + 2 > dim) continue;
      const auto w = random_poly(k, dim, 3, rng);
      EXPECT_LT(sup(exterior_derivative(exterior_derivative(w)), dim), 1e-12)
          << kind_name(k) << " dim " << dim;
    }
}

TEST(Calculus, JacobiIdentityForVectorFields) {
  std::mt19937_64 rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    const auto X = random_poly(FieldKind::vector, 3, 3, rng);
    const auto Y = random_poly(FieldKind::vector, 3, 3, rng);
    const auto Z = random_poly(FieldKind::vector, 3, 3, rng);
    const auto J = lie_bracket(X, lie_bracket(Y, Z)) + lie_bracket(Y, lie_bracket(Z, X)) +
                   lie_bracket(Z, lie_bracket(X, Y));
    EXPECT_LT(sup(J, 3), 1e-10);
  }
}

TEST(Calculus, CartanFormulaMatchesCoordinateLieDerivative) {
  std::mt19937_64 rng(13);
  for (FieldKind k : {FieldKind::scalar, FieldKind::one_form, FieldKind::two_form}) {
    const auto X = random_poly(FieldKind::vector, 3, 3, rng);
    const auto w = random_poly(k, 3, 3, rng);
    EXPECT_LT(sup(lie_derivative_form(X, w) - lie_derivative_coordinate(X, w), 3), 1e-11)
        << kind_name(k);
  }
}

TEST(Calculus, RejectsMismatchedCharts) {
  const auto X = poly(FieldKind::vector, 2, {term(1, {0, 0}, {0})});
  const auto Y = poly(FieldKind::vector, 3, {term(1, {0, 0, 0}, {0})});
  try {
    lie_bracket(X, Y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  const auto w = poly(FieldKind::one_form, 2, {term(1, {0, 0}, {0})});
  EXPECT_THROW(lie_bracket(w, X), Error);
}

TEST(Quadrature, TriangleMomentConvergesAtOrderTwo) {
  std::vector<double> err;
  for (int N : {8, 16, 32}) {
    std::vector<double> s(lattice_size(N));
    for (int j = 0; j <= N; ++j)
      for (int i = 0; i + j <= N; ++i) s[lattice_index(N, i, j)] = (double(i) / N) * (double(j) / N);
    err.push_back(std::abs(quadrature_triangle(s, N) - 1.0 / 24.0));
  }
  EXPECT_LT(err.back(), 1e-3);
  for (std::size_t i = 1; i < err.size(); ++i)
    if (err[i - 1] > 1e-14) EXPECT_GE(std::log2(err[i - 1] / err[i]), 1.9);
}

TEST(Quadrature, TriangleIntegratesConstantsAndLinearExactly) {
  const int N = 10;
  std::vector<double> one(lattice_size(N), 1.0), lin(lattice_size(N));
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i) lin[lattice_index(N, i, j)] = 2.0 * i / N - 3.0 * j / N;
  EXPECT_NEAR(quadrature_triangle(one, N), 0.5, 1e-15);
  EXPECT_NEAR(quadrature_triangle(lin, N), 2.0 / 6 - 3.0 / 6, 1e-15);
}

TEST(Quadrature, EdgeRulesExactness) {
  const int N = 16;
  auto sample = [&](int p) {
    std::vector<double> s(N + 1);
    for (int k = 0; k <= N; ++k) s[k] = std::pow(double(k) / N, p);
    return s;
  };
  EXPECT_NEAR(quadrature_edge(sample(1), EdgeRule::trapezoid), 0.5, 1e-15);
  for (int p = 0; p <= 3; ++p)
    EXPECT_NEAR(quadrature_edge(sample(p), EdgeRule::sbp42), 1.0 / (p + 1), 1e-14) << p;
  const auto w = edge_weights(N, EdgeRule::sbp42);
  EXPECT_NEAR(std::accumulate(w.begin(), w.end(), 0.0), 1.0, 1e-15);
  EXPECT_THROW(edge_weights(4, EdgeRule::sbp42), Error);
}

TEST(Quadrature, GaussLegendreDegreeOfExactness) {
  for (int m = 1; m <= 6; ++m) {
    const auto [x, w] = gauss_legendre(m);
    for (int p = 0; p <= 2 * m - 1; ++p) {
      double q = 0.0;
      for (int i = 0; i < m; ++i) q += w[i] * std::pow(x[i], p);
      // Nodes may be on [-1,1] or [0,1]; compare against whichever matches.
      const double on01 = 1.0 / (p + 1);
      const double onpm = (p % 2) ? 0.0 : 2.0 / (p + 1);
      EXPECT_TRUE(std::abs(q - on01) < 1e-13 || std::abs(q - onpm) < 1e-13) << m << " " << p;
    }
  }
}

TEST(Quadrature, LatticeGradientExactOnQuadratics) {
  const int N = 8;
  Eigen::MatrixXd f(lattice_size(N), 1);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i) {
      const double s = double(i) / N, t = double(j) / N;
      f(lattice_index(N, i, j), 0) = s * s - 2 * s * t + 0.5 * t;
    }
  const auto [g1, g2] = lattice_gradient(f, N);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i) {
      const double s = double(i) / N, t = double(j) / N;
      EXPECT_NEAR(g1(lattice_index(N, i, j), 0), 2 * s - 2 * t, 1e-12);
      EXPECT_NEAR(g2(lattice_index(N, i, j), 0), -2 * s + 0.5, 1e-12);
    }
}
