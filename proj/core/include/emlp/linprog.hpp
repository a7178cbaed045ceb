#pragma once

#include <optional>
#include <vector>

#include "emlp/detail/simplex.hpp"
#include "emlp/rational.hpp"

namespace emlp {

enum class LPMode { Exact, Float };

/// Maximize c·x subject to per-row bounds lo <= a·x <= hi (either side may
/// be absent; lo == hi expresses an equality row).  Variables are free.
struct LPProblem {
    int num_vars = 0;
    std::vector<Rational> objective;
    struct Row {
        std::vector<Rational> coeffs;
        std::optional<Rational> lo, hi;
    };
    std::vector<Row> rows;
};

struct LPSolution {
    LPStatus status = LPStatus::NumericalFailure;
    std::vector<Rational> x;
    Rational objective = 0;
    /// Largest bound violation of x (exact mode: always 0 on optimal).
    Rational max_violation = 0;
    long iterations = 0;
    LPMode mode = LPMode::Exact;
};

/// Exact mode runs a rational simplex with Bland's rule; float mode runs
/// the same pivoting in doubles (Dantzig, Bland fallback) and reports the
/// exact residuals of the returned point.
LPSolution solve(const LPProblem& problem, LPMode mode);

} // namespace emlp
