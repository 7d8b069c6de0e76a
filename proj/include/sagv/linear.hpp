#pragma once

#include "sagv/base.hpp"

#include <vector>

namespace sagv
{

using Matrix = std::vector< std::vector< Rational > >;

/// Solves A x = b exactly by Gaussian elimination with pivoting on the
/// first non-zero entry. Throws InvalidModel if A is singular.
std::vector< Rational > solve_linear( Matrix a, std::vector< Rational > b );

} // namespace sagv
