#pragma once

#include <hcl/rational.hpp>

#include <vector>

namespace hcl {

// Nonzero diagonal of the Smith normal form of an integral matrix,
// each dividing the next. Throws if an entry is not an integer.
std::vector<mpz_class> smith_invariants(const QMatrix& m);

}  // namespace hcl
