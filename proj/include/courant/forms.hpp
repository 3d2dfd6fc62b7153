#pragma once

#include <functional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "courant/courant_algebra.hpp"
#include "courant/simplex.hpp"

namespace courant {

// Forms on the discretized mapping spaces. Edge integrals use the SBP norm
// for N >= 8 (trapezoid below); the transgressions integrate a piecewise
// polynomial reconstruction of the nodal data with Gauss-Legendre points.

/// lambda1(X) = int v . xi.
double lambda1(const DiscretePath& base, const TangentPath& X);
/// omega1(X, Y) = int v . chi' - v' . chi; independent of the base point.
double omega1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y);
/// phi^H_1(X, Y) = int H_x(v, v', dx/dt).
double phi_H_1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
               const TwistClass& tw);
double omega_H_1(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
                 const TwistClass& tw);
/// int K_x(v, v', v'', dx/dt) for a 4-form K (the transgression of dH).
double transgress_four_form(const DiscretePath& base, const TangentPath& X, const TangentPath& Y,
                            const TangentPath& Z, const SmoothField& K);

// Triangle forms are boundary integrals over the three oriented faces with
// signs (+, -, +).
double lambda2(const DiscreteTriangle& base, const TangentTriangle& X);
double omega2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y);
double phi_H_2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y,
               const TwistClass& tw);
double omega_H_2(const DiscreteTriangle& base, const TangentTriangle& X, const TangentTriangle& Y,
                 const TwistClass& tw);

/// A k-form on the discretized path space.
struct PathForm {
  int degree = 0;
  std::function<double(const DiscretePath&, std::span<const TangentPath>)> eval;
  double operator()(const DiscretePath& base, std::span<const TangentPath> args) const;
};

/// A k-form on the discretized triangle space.
struct TriangleForm {
  int degree = 0;
  std::function<double(const DiscreteTriangle&, std::span<const TangentTriangle>)> eval;
  double operator()(const DiscreteTriangle& base, std::span<const TangentTriangle> args) const;
};

PathForm lambda1_form();
PathForm omega1_form();
PathForm phi_H_1_form(const TwistClass& tw);
PathForm omega_H_1_form(const TwistClass& tw);

/// delta a = sum_i (-1)^i d_i^* a, evaluated through face().
TriangleForm simplicial_coboundary(const PathForm& form);

/// d on the (linear) discretized path space: alternating sum of directional
/// derivatives, each a 5-point central difference of step h along the
/// sup-normalized direction.
PathForm exterior_derivative_mapping(const PathForm& form, double h = 1e-4);

/// Largest sup-norm entry of a tangent, used to normalize directions.
double sup_norm(const PathLattice& p);

/// Gram matrix of omega^H_1 at `base` in the quadrature-normalized nodal
/// basis (v and chi coordinates scaled by sqrt(weight)), size 2n(N+1).
Eigen::MatrixXd omega_H_1_gram(const DiscretePath& base, const TwistClass& tw);

}  // namespace courant
