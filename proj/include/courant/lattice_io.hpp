#pragma once

#include <string>
#include <variant>

#include "courant/simplex.hpp"

namespace courant {

/// Text dump: a header line `lattice kind=<kind> n=<dim> N=<N>`, one comment
/// line naming the columns, then one record per node with %.17g values.
/// Paths list `k point covector`; triangles list `i j point slot1 slot2` in
/// lattice storage order.
std::string dump_lattice(const DiscretePath& p);
std::string dump_lattice(const TangentPath& p);
std::string dump_lattice(const DiscreteTriangle& t);
std::string dump_lattice(const TangentTriangle& t);

using AnyLattice = std::variant<DiscretePath, TangentPath, DiscreteTriangle, TangentTriangle>;

/// Inverse of dump_lattice; throws parse errors with the offending line.
AnyLattice parse_lattice(const std::string& text);

}  // namespace courant
