#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "courant/error.hpp"
#include "courant/forms.hpp"
#include "courant/lagrangian.hpp"
#include "courant/morphisms.hpp"
#include "courant/quadrature.hpp"
#include "helpers.hpp"

using namespace courant;
using namespace testing_util;

namespace {

// x2 dx1^dx3 + x1 dx2^dx3 + 0.5 dx1^dx2, closed.
SmoothField closed_B() {
  return poly(FieldKind::two_form, 3,
              {term(1, {0, 1, 0}, {0, 2}), term(1, {1, 0, 0}, {1, 2}), term(0.5, {0, 0, 0}, {0, 1})});
}

DiracFrame bgraph() { return DiracFrame::graph_of_two_form(closed_B(), TwistClass::none(3)); }

DiracFrame constpi() {
  return DiracFrame::graph_of_bivector(
      poly(FieldKind::bivector, 3, {term(1, {0, 0, 0}, {0, 1}), term(0.5, {0, 0, 0}, {1, 2})}));
}

double order(double coarse, double fine) { return std::log2(coarse / fine); }

double max_r(const ResidualPair& r) { return std::max(r.r1, r.r2); }

}  // namespace

TEST(SimplexMap, SamplesAndGradientsArePolynomialExact) {
  Eigen::MatrixXd c(1, 3);
  c << 0.5, 2.0, -1.0;  // degree 1: monomials 1, s1, s2
  const SimplexMap m(1, c);
  EXPECT_NEAR(m.value(0.25, 0.5)[0], 2.0 * 0.25 - 0.5 + 0.5, 1e-15);
  const auto [g1, g2] = m.gradient(0.3, 0.1);
  EXPECT_DOUBLE_EQ(g1[0], 2.0);
  EXPECT_DOUBLE_EQ(g2[0], -1.0);
  const auto S = m.sample(4);
  EXPECT_EQ(S.rows(), lattice_size(4));
  EXPECT_NEAR(S(lattice_index(4, 1, 2), 0), 2.0 * 0.25 - 0.5 + 0.5, 1e-15);
}

TEST(Morphism, ConstantMapWithZeroPsi) {
  const int N = 6;
  AlgebroidTriangle T{bgraph(), N, Eigen::MatrixXd::Constant(lattice_size(N), 3, 0.2),
                      Eigen::MatrixXd::Zero(lattice_size(N), 3), Eigen::MatrixXd::Zero(lattice_size(N), 3)};
  const auto r = morphism_residual(T);
  EXPECT_LT(r.r1, 1e-14);  // stencil weights sum to zero only up to rounding
  EXPECT_EQ(r.r2, 0.0);
  const AlgebroidTangent zero{Eigen::MatrixXd::Zero(lattice_size(N), 3), Eigen::MatrixXd::Zero(lattice_size(N), 3),
                              Eigen::MatrixXd::Zero(lattice_size(N), 3)};
  const auto d = tangent_residual(T, zero);
  EXPECT_EQ(d.r1, 0.0);
  EXPECT_EQ(d.r2, 0.0);
  const auto F = F_map(T);
  EXPECT_EQ(F.slot1.norm(), 0.0);
  EXPECT_EQ(F.slot2.norm(), 0.0);
}

TEST(Morphism, ResidualsConvergeForBothFamilies) {
  std::mt19937_64 rng(1);
  const auto fb = bgraph(), fp = constpi();
  const SimplexMap f = SimplexMap::random(3, 3, 0.5, rng), v = SimplexMap::random(3, 3, 1.0, rng);
  const SimplexMap g = SimplexMap::random(3, 3, 0.5, rng), h = SimplexMap::random(3, 3, 1.0, rng);
  const Eigen::Vector3d f0(0.1, -0.2, 0.3), v0(0.5, 0.0, -0.5);
  std::vector<double> rb, rp, tb, tp;
  for (int N : {8, 16, 32}) {
    const auto Tb = build_morphism_bgraph(fb, f, N);
    const auto Tp = build_morphism_constpi(fp, g, f0, N);
    rb.push_back(max_r(morphism_residual(Tb)));
    rp.push_back(max_r(morphism_residual(Tp)));
    tb.push_back(max_r(tangent_residual(Tb, build_tangent_bgraph(Tb, v))));
    tp.push_back(max_r(tangent_residual(Tp, build_tangent_constpi(Tp, h, v0))));
  }
  for (const auto* r : {&rb, &rp, &tb, &tp}) {
    EXPECT_LT(r->back(), 1e-2);
    for (int i = 1; i < 3; ++i)
      if ((*r)[i - 1] > 1e-11) EXPECT_GE(order((*r)[i - 1], (*r)[i]), 1.5);
  }
}

TEST(Morphism, WrongFrameKindRejected) {
  std::mt19937_64 rng(2);
  const SimplexMap g = SimplexMap::random(3, 2, 0.5, rng);
  EXPECT_THROW(build_morphism_constpi(bgraph(), g, Eigen::Vector3d::Zero(), 8), Error);
  EXPECT_THROW(build_morphism_bgraph(constpi(), g, 8), Error);
}

TEST(Morphism, PushforwardTangentMatchesGraphFormula) {
  // chi_i = v^k d_k B_ij psi^j + B_ij mu^j, evaluated per node from the field.
  std::mt19937_64 rng(3);
  const auto frame = bgraph();
  const SmoothField B = closed_B();
  const int N = 8, n = 3;
  const auto T = build_morphism_bgraph(frame, SimplexMap::random(3, 3, 0.5, rng), N);
  const auto t = build_tangent_bgraph(T, SimplexMap::random(3, 3, 1.0, rng));
  const auto Ft = F_tangent(T, t);
  double worst = 0.0;
  for (int m = 0; m < lattice_size(N); ++m) {
    const std::vector<double> x{T.f(m, 0), T.f(m, 1), T.f(m, 2)};
    const auto jets = B.jets(x, 1);
    for (int slot = 0; slot < 2; ++slot) {
      const Eigen::MatrixXd& psi = slot ? T.psi2 : T.psi1;
      const Eigen::MatrixXd& mu = slot ? t.mu2 : t.mu1;
      const Eigen::MatrixXd& chi = slot ? Ft.slot2 : Ft.slot1;
      for (int i = 0; i < n; ++i) {
        double want = 0.0;
        for (int j = 0; j < n; ++j) {
          const Jet& Bij = jets[i * n + j];
          for (int k = 0; k < n; ++k) want += t.v(m, k) * Bij.first(k) * psi(m, j);
          want += Bij.value() * mu(m, j);
        }
        worst = std::max(worst, std::abs(chi(m, i) - want));
      }
    }
  }
  EXPECT_LT(worst, 1e-13);
}

TEST(Morphism, ConstantBivectorPushforwardIsMu) {
  std::mt19937_64 rng(4);
  const auto T = build_morphism_constpi(constpi(), SimplexMap::random(3, 3, 0.5, rng), Eigen::Vector3d::Zero(), 8);
  const auto t = build_tangent_constpi(T, SimplexMap::random(3, 3, 1.0, rng), Eigen::Vector3d::Ones());
  const auto Ft = F_tangent(T, t);
  EXPECT_LT((Ft.slot1 - t.mu1).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((Ft.slot2 - t.mu2).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((Ft.point - t.v).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(Morphism, PushedTangentsAreOmegaIsotropic) {
  PushforwardCheckOptions opts;
  opts.pairs = 4;
  std::vector<double> r;
  for (int N : {8, 16}) r.push_back(pushforward_isotropy_check(bgraph(), MorphismFamily::bgraph, N, opts).residual);
  EXPECT_GE(order(r[0], r[1]), 1.5);
  EXPECT_LT(r[1], 1e-3);
  const auto c = pushforward_isotropy_check(constpi(), MorphismFamily::constpi, 16, opts);
  EXPECT_LT(c.residual, 1e-3);
  EXPECT_LT(c.coboundary_residual, 1e-3);
}

TEST(APath, ConstantPathWithZeroCovector) {
  APath p{DiscretePath::zeros(8, 3), Eigen::MatrixXd::Zero(9, 3)};
  p.path.point.rowwise() = Eigen::RowVector3d(0.3, 0.1, -0.2);
  EXPECT_LT(apath_residual(bgraph(), p), 1e-15);
}

TEST(APath, GraphPathConverges) {
  Eigen::MatrixXd c(4, 3);
  c << 0.1, -0.2, 0.3, 0.5, 0.2, -0.4, -0.3, 0.1, 0.2, 0.2, -0.1, 0.1;
  const double r16 = apath_residual(bgraph(), build_apath_bgraph(bgraph(), c, 16));
  const double r32 = apath_residual(bgraph(), build_apath_bgraph(bgraph(), c, 32));
  EXPECT_LT(r32, 1e-3);
  EXPECT_GE(order(r16, r32), 1.5);
}

TEST(APath, CorruptedCovectorShowsPerturbationSize) {
  // For D = TM the frame span has zero covector part, so the distance is |delta|.
  const auto tm = DiracFrame::graph_of_two_form(SmoothField::zero(FieldKind::two_form, 3), TwistClass::none(3));
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(4, 3);
  c(1, 0) = 1.0;
  auto p = build_apath_bgraph(tm, c, 16);
  EXPECT_LT(apath_residual(tm, p), 1e-12);
  p.path.covector(5, 1) += 0.3;
  EXPECT_NEAR(apath_residual(tm, p), 0.3, 1e-12);
}

TEST(Lagrangian, FaceConsistentDifferentialOfLinearData) {
  const int N = 8;
  Eigen::MatrixXd g(lattice_size(N), 1);
  for (int j = 0; j <= N; ++j)
    for (int i = 0; i + j <= N; ++i) g(lattice_index(N, i, j), 0) = 3.0 * i / N - 2.0 * j / N + 1.0;
  const auto [s1, s2] = face_consistent_differential(g, N);
  EXPECT_LT((s1.array() - 3.0).abs().maxCoeff(), 1e-12);
  EXPECT_LT((s2.array() + 2.0).abs().maxCoeff(), 1e-12);
}

TEST(Lagrangian, TangentBundleAtUnit) {
  const auto tm = DiracFrame::graph_of_two_form(SmoothField::zero(FieldKind::two_form, 2), TwistClass::none(2));
  const auto r = lagrangian_at_unit(tm, Eigen::Vector2d(0.1, 0.2), 8, 0, 5);
  EXPECT_TRUE(r.conclusive) << r.note;
  EXPECT_LT(r.isotropy_residual, 1e-8);
  EXPECT_LT(r.coisotropy_defect, 1e-6);
  EXPECT_EQ(r.kernel_dim, 3 * 2);
}

TEST(Lagrangian, ConstantTwoFormGraphAtUnit) {
  const auto B = poly(FieldKind::two_form, 2, {term(1.5, {0, 0}, {0, 1})});
  const auto f = DiracFrame::graph_of_two_form(B, TwistClass::none(2));
  const auto r = lagrangian_at_unit(f, Eigen::Vector2d(0.1, 0.2), 8, 0, 6);
  EXPECT_TRUE(r.conclusive) << r.note;
  EXPECT_LT(r.isotropy_residual, 1e-6);
  EXPECT_LT(r.coisotropy_defect, 1e-4);
}

TEST(Lagrangian, IsotropicControlIsNotCoisotropic) {
  FrameOptions o;
  o.allow_non_maximal = true;
  const auto f = DiracFrame::constant(Eigen::MatrixXd::Identity(3, 2), Eigen::MatrixXd::Zero(3, 2),
                                      TwistClass::none(3), o);
  const auto r = lagrangian_at_unit(f, Eigen::Vector3d(0.1, 0.2, 0.3), 8, 0, 7);
  EXPECT_TRUE(r.conclusive) << r.note;
  EXPECT_LT(r.isotropy_residual, 1e-8);
  EXPECT_GT(r.coisotropy_defect, 1e-2);
}

TEST(Lagrangian, ClosedTwoFormGraphAwayFromUnit) {
  std::mt19937_64 rng(8);
  const auto f = SimplexMap::random(3, 3, 0.5, rng);
  const auto r = lagrangian_general_bgraph(bgraph(), f, 8, 0, 9);
  EXPECT_TRUE(r.conclusive) << r.note;
  EXPECT_LT(r.isotropy_residual, 1e-6);
  EXPECT_LT(r.coisotropy_defect, 1e-4);
}

TEST(Lagrangian, NoSpectralGapIsInconclusive) {
  const auto tm = DiracFrame::graph_of_two_form(SmoothField::zero(FieldKind::two_form, 2), TwistClass::none(2));
  const auto r = lagrangian_at_unit(tm, Eigen::Vector2d::Zero(), 4, 0, 1, 0.5);
  EXPECT_FALSE(r.conclusive);
  EXPECT_FALSE(r.note.empty());
}
