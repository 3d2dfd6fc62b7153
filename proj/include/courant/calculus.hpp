#pragma once

#include "courant/field.hpp"

namespace courant {

/// d of a k-form, k <= 3. Components follow
/// (d w)_{i0..ik} = sum_a (-1)^a d_{i_a} w_{i0..^i_a..ik}.
SmoothField exterior_derivative(const SmoothField& form);

/// (i_X w)_{i2..ik} = X^i w_{i i2..ik}; k >= 1.
SmoothField interior_product(const SmoothField& X, const SmoothField& form);

/// [X,Y]^i = X^j d_j Y^i - Y^j d_j X^i.
SmoothField lie_bracket(const SmoothField& X, const SmoothField& Y);

/// L_X w by the Cartan formula i_X d + d i_X; k <= 2.
SmoothField lie_derivative_form(const SmoothField& X, const SmoothField& form);

/// L_X w from the coordinate expression X^j d_j w_I + sum_a w_{..j..} d_{i_a} X^j.
/// Independent of the Cartan route, used to cross-check it.
SmoothField lie_derivative_coordinate(const SmoothField& X, const SmoothField& form);

/// Largest component magnitude of `f` over the given points.
double sup_norm(const SmoothField& f, const std::vector<std::vector<double>>& points);

/// Seeded uniform points in [lo, hi]^n.
std::vector<std::vector<double>> sample_points(int dim, int count, std::uint64_t seed,
                                               double lo = -1.0, double hi = 1.0);

}  // namespace courant
