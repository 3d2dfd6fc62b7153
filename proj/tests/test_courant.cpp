#include <gtest/gtest.h>

#include "courant/courant_algebra.hpp"
#include "courant/dirac.hpp"
#include "courant/error.hpp"
#include "helpers.hpp"

using namespace courant;
using namespace testing_util;

namespace {

SmoothField coord_vector(int dim, int i, std::vector<int> mono = {}) {
  if (mono.empty()) mono.assign(dim, 0);
  return poly(FieldKind::vector, dim, {term(1, mono, {i})});
}
SmoothField coord_form(int dim, int i, std::vector<int> mono = {}) {
  if (mono.empty()) mono.assign(dim, 0);
  return poly(FieldKind::one_form, dim, {term(1, mono, {i})});
}
GeneralizedSection sec(SmoothField X, SmoothField xi) { return {std::move(X), std::move(xi)}; }

GeneralizedSection random_section(int dim, std::mt19937_64& rng) {
  return sec(random_poly(FieldKind::vector, dim, 3, rng), random_poly(FieldKind::one_form, dim, 3, rng));
}

const std::vector<double> x0{0.3, -0.4, 0.8};

// B = x3 dx1^dx2 + x1^2 dx2^dx3: dB = 2 x1 dx1^dx2^dx3 - ... is nonzero.
SmoothField nonclosed_B() {
  return poly(FieldKind::two_form, 3, {term(1, {0, 0, 1}, {0, 1}), term(1, {2, 0, 0}, {1, 2})});
}

// x2 dx1^dx3 + x1 dx2^dx3 + 0.5 dx1^dx2: closed and non-constant.
SmoothField closed_B() {
  return poly(FieldKind::two_form, 3,
              {term(1, {0, 1, 0}, {0, 2}), term(1, {1, 0, 0}, {1, 2}), term(0.5, {0, 0, 0}, {0, 1})});
}

SmoothField lie_poisson_so3() {
  return poly(FieldKind::bivector, 3,
              {term(1, {0, 0, 1}, {0, 1}), term(1, {1, 0, 0}, {1, 2}), term(1, {0, 1, 0}, {2, 0})});
}

double levi_civita(int a, int b, int c) {
  if (a == b || b == c || a == c) return 0.0;
  return ((b - a + 3) % 3 == 1) ? 1.0 : -1.0;
}

}  // namespace

TEST(Pairing, Examples) {
  const auto a = sec(coord_vector(3, 0), coord_form(3, 0));
  EXPECT_EQ(pairing(a, a, x0), 2.0);
  EXPECT_EQ(pairing(GeneralizedSection::vector_part(coord_vector(3, 0)),
                    GeneralizedSection::form_part(coord_form(3, 1)), x0),
            0.0);
  EXPECT_EQ(pairing(sec(coord_vector(3, 0), coord_form(3, 1)), sec(coord_vector(3, 1), coord_form(3, 0)), x0),
            2.0);
}

TEST(Pairing, SymmetricBitwise) {
  std::mt19937_64 rng(21);
  for (int t = 0; t < 10; ++t) {
    const auto a = random_section(3, rng), b = random_section(3, rng);
    for (const auto& x : sample_points(3, 5, t)) EXPECT_EQ(pairing(a, b, x), pairing(b, a, x));
  }
}

TEST(Pairing, RejectsChartMismatch) {
  const auto a = GeneralizedSection::vector_part(coord_vector(3, 0));
  const auto b = GeneralizedSection::vector_part(coord_vector(2, 0));
  EXPECT_THROW(pairing(a, b, x0), Error);
}

TEST(CourantBracket, Examples) {
  const auto d1 = GeneralizedSection::vector_part(coord_vector(3, 0));
  const auto dx1 = GeneralizedSection::form_part(coord_form(3, 0));
  const auto r1 = courant_bracket(d1, dx1);
  EXPECT_EQ(section_norm(r1, x0), 0.0);

  const auto x2d1 = GeneralizedSection::vector_part(coord_vector(3, 0, {0, 1, 0}));
  const auto r2 = courant_bracket(x2d1, dx1);
  for (const auto& x : sample_points(3, 5, 3)) {
    EXPECT_EQ(r2.X.values(x), (std::vector<double>{0, 0, 0}));
    EXPECT_EQ(r2.xi.values(x), (std::vector<double>{0, 1, 0}));
  }

  const auto a = sec(coord_vector(3, 0), coord_form(3, 0));
  EXPECT_EQ(section_norm(courant_bracket(a, a), x0), 0.0);
}

TEST(CourantBracket, SelfBracketIsHalfDifferentialOfPairing) {
  std::mt19937_64 rng(22);
  for (int t = 0; t < 5; ++t) {
    const auto a = random_section(3, rng);
    const auto aa = courant_bracket(a, a);
    const auto half_d = 0.5 * exterior_derivative(pairing_field(a, a));
    EXPECT_LT(sup(aa.X, 3), 1e-12);
    EXPECT_LT(sup(aa.xi - half_d, 3), 1e-10);
  }
}

TEST(TwistedBracket, VolumeTwistOnCoordinateFields) {
  // Convention: the twist adds H(X1, X2, .), so [d1, d2]_H = +dx3.
  const auto H = poly(FieldKind::three_form, 3, {term(1, {0, 0, 0}, {0, 1, 2})});
  const TwistClass tw(H);
  const auto r = twisted_bracket(GeneralizedSection::vector_part(coord_vector(3, 0)),
                                 GeneralizedSection::vector_part(coord_vector(3, 1)), tw);
  EXPECT_EQ(r.X.values(x0), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(r.xi.values(x0), (std::vector<double>{0, 0, 1}));
}

TEST(TwistedBracket, ZeroTwistEqualsCourantBitwise) {
  std::mt19937_64 rng(23);
  const auto a = random_section(3, rng), b = random_section(3, rng);
  const auto u = courant_bracket(a, b), v = twisted_bracket(a, b, TwistClass::none(3));
  for (const auto& x : sample_points(3, 10, 4)) {
    EXPECT_EQ(u.X.values(x), v.X.values(x));
    EXPECT_EQ(u.xi.values(x), v.xi.values(x));
  }
}

TEST(TwistedBracket, JacobiHoldsForClosedTwist) {
  std::mt19937_64 rng(24);
  const TwistClass none = TwistClass::none(3);
  const TwistClass tw(random_poly(FieldKind::three_form, 3, 3, rng));
  EXPECT_TRUE(tw.closed());
  for (int t = 0; t < 5; ++t) {
    const auto a = random_section(3, rng), b = random_section(3, rng), c = random_section(3, rng);
    for (const auto& x : sample_points(3, 4, t)) {
      EXPECT_LT(jacobi_residual(a, b, c, none, x), 1e-8);
      EXPECT_LT(jacobi_residual(a, b, c, tw, x), 1e-8);
    }
  }
}

TEST(TwistedBracket, JacobiDetectsNonClosedTwist) {
  // H = x4 dx1^dx2^dx3 on R^4: dH = dx4^dx123 != 0.
  const TwistClass tw(poly(FieldKind::three_form, 4, {term(1, {0, 0, 0, 1}, {0, 1, 2})}));
  EXPECT_FALSE(tw.closed());
  EXPECT_GT(tw.closedness_residual(), 0.5);
  std::vector<GeneralizedSection> d;
  for (int i = 0; i < 4; ++i) d.push_back(GeneralizedSection::vector_part(coord_vector(4, i)));
  const std::vector<double> x{0.1, 0.2, 0.3, 0.4};
  EXPECT_GT(jacobi_residual(d[0], d[1], d[2], tw, x) + jacobi_residual(d[0], d[1], d[3], tw, x), 0.5);
}

TEST(TwistedBracket, ConstantSectionsSatisfyJacobi) {
  const auto a = sec(coord_vector(3, 0), coord_form(3, 1));
  const auto b = sec(coord_vector(3, 2), coord_form(3, 0));
  const auto c = GeneralizedSection::form_part(coord_form(3, 2));
  EXPECT_EQ(jacobi_residual(a, b, c, TwistClass::none(3), x0), 0.0);
}

TEST(DiracFrame, GraphOfZeroTwoForm) {
  const auto f = DiracFrame::graph_of_two_form(SmoothField::zero(FieldKind::two_form, 3), TwistClass::none(3));
  EXPECT_TRUE(f.maximal());
  EXPECT_TRUE(f.q(x0).isApprox(Eigen::MatrixXd::Identity(3, 3)));
  EXPECT_EQ(f.p(x0).norm(), 0.0);
  const auto C = structure_functions(f, x0);
  for (double c : C.C) EXPECT_EQ(c, 0.0);
}

TEST(DiracFrame, GraphOfConstantTwoForm) {
  // B = dx1^dx2 gives Theta_1 = d1 - dx2, Theta_2 = d2 + dx1, Theta_3 = d3.
  const auto B = poly(FieldKind::two_form, 3, {term(1, {0, 0, 0}, {0, 1})});
  const auto f = DiracFrame::graph_of_two_form(B, TwistClass::none(3));
  EXPECT_EQ(f.sections()[0].xi.values(x0), (std::vector<double>{0, -1, 0}));
  EXPECT_EQ(f.sections()[1].xi.values(x0), (std::vector<double>{1, 0, 0}));
  EXPECT_EQ(f.sections()[2].xi.values(x0), (std::vector<double>{0, 0, 0}));
  for (double c : structure_functions(f, x0).C) EXPECT_EQ(c, 0.0);
}

TEST(DiracFrame, TwistedGraphAcceptedWhenHIsDB) {
  const auto B = poly(FieldKind::two_form, 3, {term(1, {1, 0, 0}, {1, 2})});
  const TwistClass tw(exterior_derivative(B));
  const auto f = DiracFrame::graph_of_two_form(B, tw);
  EXPECT_LT(f.validated_involutivity(), 1e-7);
  for (const auto& x : sample_points(3, 5, 6)) {
    const auto C = structure_functions(f, x);
    EXPECT_LT(C.offspan_residual, 1e-8);
    for (double c : C.C) EXPECT_LT(std::abs(c), 1e-8);
  }
}

TEST(DiracFrame, NonClosedTwoFormRejected) {
  try {
    DiracFrame::graph_of_two_form(nonclosed_B(), TwistClass::none(3));
    FAIL() << "expected the involutivity gate to fire";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::precondition);
    EXPECT_NE(std::string(e.what()).find("involutiv"), std::string::npos) << e.what();
  }
}

TEST(DiracFrame, NonInvolutiveFrameReportsOffSpanResidual) {
  FrameOptions opts;
  opts.validate = false;
  const auto f = DiracFrame::graph_of_two_form(nonclosed_B(), TwistClass::none(3), opts);
  EXPECT_GT(structure_functions(f, x0).offspan_residual, 0.1);
  EXPECT_GT(involutivity_residual(f, sample_points(3, 10, 1)), 0.1);
}

TEST(DiracFrame, BivectorGraphs) {
  const auto zero = DiracFrame::graph_of_bivector(SmoothField::zero(FieldKind::bivector, 3));
  EXPECT_EQ(zero.q(x0).norm(), 0.0);
  EXPECT_TRUE(zero.p(x0).isApprox(Eigen::MatrixXd::Identity(3, 3)));
  for (double c : structure_functions(zero, x0).C) EXPECT_EQ(c, 0.0);

  const auto pi = poly(FieldKind::bivector, 3, {term(2, {0, 0, 0}, {0, 1}), term(-1, {0, 0, 0}, {1, 2})});
  const auto cst = DiracFrame::graph_of_bivector(pi);
  for (double c : structure_functions(cst, x0).C) EXPECT_LT(std::abs(c), 1e-14);
}

TEST(DiracFrame, LiePoissonStructureFunctionsAreLeviCivita) {
  const auto f = DiracFrame::graph_of_bivector(lie_poisson_so3());
  const auto C = structure_functions(f, std::vector<double>{1, 0, 0});
  for (int g = 0; g < 3; ++g)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) EXPECT_NEAR(C(g, a, b), levi_civita(a, b, g), 1e-12) << g << a << b;
}

TEST(DiracFrame, StructureFunctionsAntisymmetric) {
  const auto f = DiracFrame::graph_of_bivector(lie_poisson_so3());
  for (const auto& x : sample_points(3, 5, 7)) {
    const auto C = structure_functions(f, x);
    for (int g = 0; g < 3; ++g)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) EXPECT_EQ(C(g, a, b), -C(g, b, a));
  }
}

TEST(DiracFrame, AcceptedFramesAreIsotropic) {
  const auto pts = sample_points(3, 100, 8);
  const auto B = DiracFrame::graph_of_two_form(closed_B(), TwistClass::none(3));
  const auto P = DiracFrame::graph_of_bivector(lie_poisson_so3());
  EXPECT_LT(isotropy_residual(B, pts), 1e-9);
  EXPECT_LT(isotropy_residual(P, pts), 1e-9);
}

TEST(DiracFrame, CorruptedFrameFailsIsotropy) {
  Eigen::MatrixXd q = Eigen::MatrixXd::Identity(3, 3), p = Eigen::MatrixXd::Zero(3, 3);
  p(0, 0) += 1.0;
  EXPECT_THROW(DiracFrame::constant(q, p, TwistClass::none(3)), Error);
  FrameOptions opts;
  opts.validate = false;
  const auto f = DiracFrame::constant(q, p, TwistClass::none(3), opts);
  EXPECT_GE(isotropy_residual(f, sample_points(3, 5, 9)), 2.0 - 1e-12);
}

TEST(DiracFrame, CoordinateIdentityHolds) {
  const auto pts = sample_points(3, 20, 10);
  EXPECT_LT(coordinate_identity_residual(DiracFrame::graph_of_two_form(closed_B(), TwistClass::none(3)), pts), 1e-7);
  EXPECT_LT(coordinate_identity_residual(DiracFrame::graph_of_bivector(lie_poisson_so3()), pts), 1e-7);
  const auto Bt = poly(FieldKind::two_form, 3, {term(1, {1, 0, 0}, {1, 2})});
  EXPECT_LT(coordinate_identity_residual(DiracFrame::graph_of_two_form(Bt, TwistClass(exterior_derivative(Bt))), pts),
            1e-7);
}

TEST(DiracFrame, RejectsNonMaximalUnlessAllowed) {
  std::vector<GeneralizedSection> s{GeneralizedSection::vector_part(coord_vector(3, 0))};
  EXPECT_THROW(DiracFrame(s, TwistClass::none(3)), Error);
  FrameOptions opts;
  opts.allow_non_maximal = true;
  const DiracFrame f(s, TwistClass::none(3), FrameKind::custom, opts);
  EXPECT_FALSE(f.maximal());
}
