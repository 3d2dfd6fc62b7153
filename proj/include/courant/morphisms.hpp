#pragma once

#include <cstdint>
#include <random>
#include <utility>

#include <Eigen/Dense>

#include "courant/dirac.hpp"
#include "courant/forms.hpp"
#include "courant/simplex.hpp"

namespace courant {

/// Polynomial map Delta^2 -> R^m in (s1, s2) with closed-form gradient.
class SimplexMap {
 public:
  /// coeffs(c, t): component c, monomial t of monomials(degree).
  SimplexMap(int degree, Eigen::MatrixXd coeffs);
  static SimplexMap random(int components, int degree, double amplitude, std::mt19937_64& rng);
  static SimplexMap constant(const Eigen::VectorXd& value);

  int components() const { return static_cast<int>(coeffs_.rows()); }
  Eigen::VectorXd value(double s1, double s2) const;
  /// (d/ds1, d/ds2)
  std::pair<Eigen::VectorXd, Eigen::VectorXd> gradient(double s1, double s2) const;

  /// Nodal values, one row per lattice node.
  Eigen::MatrixXd sample(int N) const;
  /// Exact gradient slots at the lattice nodes.
  std::pair<Eigen::MatrixXd, Eigen::MatrixXd> sample_gradient(int N) const;

  SimplexMap operator+(const SimplexMap& o) const;
  SimplexMap operator*(double s) const;
  /// Left-multiplication of the values by a constant matrix.
  SimplexMap mapped(const Eigen::MatrixXd& A) const;

 private:
  int degree_;
  std::vector<std::pair<int, int>> monomials_;
  Eigen::MatrixXd coeffs_;
};

/// A lattice Lie algebroid morphism T Delta^2 -> D: base map f and the
/// coefficient 1-forms psi^a, stored as values on e1 (psi1) and e2 (psi2).
struct AlgebroidTriangle {
  DiracFrame frame;
  int N = 0;
  Eigen::MatrixXd f;     // M x n
  Eigen::MatrixXd psi1;  // M x k
  Eigen::MatrixXd psi2;
};

/// Variation (v, mu) of an AlgebroidTriangle.
struct AlgebroidTangent {
  Eigen::MatrixXd v;    // M x n
  Eigen::MatrixXd mu1;  // M x k
  Eigen::MatrixXd mu2;
};

struct ResidualPair {
  double r1 = 0.0;
  double r2 = 0.0;
};

/// r1 = max |df - q(f) psi|, r2 = max |d psi + 1/2 C(f) psi ^ psi| with
/// second-order lattice derivatives.
ResidualPair morphism_residual(const AlgebroidTriangle& T);
/// Residuals of the linearized morphism equations.
ResidualPair tangent_residual(const AlgebroidTriangle& T, const AlgebroidTangent& t);

/// Morphism of a 2-form graph from any base map: psi = df.
AlgebroidTriangle build_morphism_bgraph(const DiracFrame& frame, const SimplexMap& f, int N);
/// Morphism of a constant bivector graph: psi = dg, f = f0 + pi#(g - g(0)).
AlgebroidTriangle build_morphism_constpi(const DiracFrame& frame, const SimplexMap& g,
                                         const Eigen::VectorXd& f0, int N);
/// 2-form graph tangent: mu = dv.
AlgebroidTangent build_tangent_bgraph(const AlgebroidTriangle& T, const SimplexMap& v);
/// Constant bivector tangent: mu = dh, v = v0 + pi#(h - h(0)).
AlgebroidTangent build_tangent_constpi(const AlgebroidTriangle& T, const SimplexMap& h,
                                       const Eigen::VectorXd& v0);

/// Covector slots p(f) psi over the base f.
DiscreteTriangle F_map(const AlgebroidTriangle& T);
/// chi_i = v^k d_k p_ia(f) psi^a + p_ia(f) mu^a.
TangentTriangle F_tangent(const AlgebroidTriangle& T, const AlgebroidTangent& t);

enum class MorphismFamily { bgraph, constpi };

struct PushforwardCheckOptions {
  int pairs = 20;
  int degree = 3;
  double base_amplitude = 0.5;
  double tangent_amplitude = 1.0;
  std::uint64_t seed = 1;
};

struct PushforwardCheckResult {
  /// max |omega^H_2(F X, F Y)| over the pairs (sup-normalized tangents).
  double residual = 0.0;
  /// The same pairs through delta(F1^* omega^H_1), i.e. via face().
  double coboundary_residual = 0.0;
};

PushforwardCheckResult pushforward_isotropy_check(const DiracFrame& frame, MorphismFamily family, int N,
                        const PushforwardCheckOptions& opts = {});

/// A path in T*M with its coefficients a(t) in the frame.
struct APath {
  DiscretePath path;
  Eigen::MatrixXd a;  // (N+1) x k
};

/// A-path of a 2-form graph over a polynomial base path x(t) = x0 + sum c_j t^j:
/// xi_i = B_ia(x) x'^a, a = x'.
APath build_apath_bgraph(const DiracFrame& frame, const Eigen::MatrixXd& poly_coeffs, int N);

/// max over nodes of the distance from (dx/dt, xi) to the frame span, with a
/// second-order nodal derivative.
double apath_residual(const DiracFrame& frame, const APath& p);

/// Closedness of F1^* omega^H_1 on the A-path family: max over random
/// direction triples of |d(F1^* omega^H_1)(a,b,c) - [H(a,b,c)]_0^1|.
double pullback_closedness(const DiracFrame& frame, MorphismFamily family, int N, int triples,
                        std::uint64_t seed, double h = 1e-4);

}  // namespace courant
