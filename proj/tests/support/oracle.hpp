#pragma once

#include "emlp/cellset.hpp"
#include "emlp/design.hpp"

namespace emlp::testing {

/// Independent facial-set oracle (cap 4096 cells): grows a maximum-support
/// nonnegative representation of the barycenter of S via exact tableau
/// LPs — the smallest face containing a point is the support union of its
/// convex representations.  Shares no code with the production closure.
CellSet bruteforce_facial(const DesignMatrix& a, const CellSet& s);

} // namespace emlp::testing
