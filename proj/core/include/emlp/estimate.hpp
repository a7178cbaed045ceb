#pragma once

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/counts.hpp"
#include "emlp/design.hpp"
#include "emlp/facial.hpp"

namespace emlp {

enum class LikelihoodForm { Theta, Mu, ThetaOnF, MuOnF2 };

enum class ParamStatus { Estimable, Diverges, Undetermined };

/// Independent cell basis for the log-ratio parameters μ_i = log p(i)/p(0):
/// L1 ⊆ F1, L2 ⊆ F2 and L ⊆ I are greedily maximal sets of cells whose
/// columns f_i - f_0 are linearly independent (exact rank arithmetic).
class MuBasis {
public:
    static MuBasis select(const DesignMatrix& a, const Counts& counts, const CellSet& f1,
                          const CellSet& f2);

    std::uint64_t zero_cell() const { return zero_; }
    const std::vector<std::uint64_t>& l() const { return l_; }
    std::size_t l1_size() const { return l1_size_; }
    std::size_t l2_size() const { return l2_size_; }

    /// Exact coordinates of f_cell - f_0 over the L columns (zero beyond L2
    /// when the cell lies in F2).  Throws when the cell is outside the span.
    std::vector<Rational> coeff(std::uint64_t cell) const;

    /// Dense double design for the μ_L parameters over a cell domain:
    /// row i gives b_i, so mu = B · μ_L.  cols ≤ ncols limits to a prefix
    /// of L (used for the μ_{L2} likelihood).
    std::vector<double> design_rows(const DesignMatrix& a, const CellSet& domain,
                                    std::size_t ncols) const;

    /// θ-space representative of μ_L (columns of the pseudo-inverse), used
    /// to evaluate every μ_i in O(|I|·faces).
    const std::vector<std::vector<double>>& theta_rep() const { return theta_rep_; }

private:
    std::uint64_t zero_ = 0;
    std::vector<std::uint64_t> l_;
    std::size_t l1_size_ = 0, l2_size_ = 0;
    const DesignMatrix* a_ = nullptr;
    mutable SpanTracker tracker_{0};
    std::vector<std::vector<double>> theta_rep_; // |L| vectors of length |J|
};

struct FitOptions {
    double tol_grad = 1e-8;
    long max_iter = 10000;
    bool precondition = true;
    double armijo_c = 1e-4;
    double backtrack = 0.5;
};

struct MaximizeResult {
    std::vector<double> x;
    double value = 0;
    double grad_norm = 0;
    long iterations = 0;
    bool converged = false;
    bool line_search_failed = false;
    std::vector<int> drifting; // coordinates flagged by the drift rule
};

/// Concave objective with gradient; optional curvature diagonal for
/// preconditioned steps.
struct Objective {
    int dim = 0;
    std::function<double(const std::vector<double>&, std::vector<double>&)> eval;
    std::function<void(const std::vector<double>&, std::vector<double>&)> curvature_diag;
};

/// Likelihood objective factory.  Mu forms need a basis; the *OnF forms
/// need the restriction domain.
Objective make_likelihood(const DesignMatrix& a, const Counts& counts, LikelihoodForm form,
                          const MuBasis* basis = nullptr, const CellSet* domain = nullptr);

/// Poisson-style surrogate of the restricted likelihood (no log on the
/// normalizer); coincides with the multinomial form at the optimum after
/// normalization.
Objective make_poisson_surrogate(const DesignMatrix& a, const Counts& counts,
                                 const MuBasis& basis, const CellSet& domain);

/// Value and gradient of a likelihood form at a point.
std::pair<double, std::vector<double>> loglik_grad(const DesignMatrix& a, const Counts& counts,
                                                   const std::vector<double>& params,
                                                   LikelihoodForm form,
                                                   const MuBasis* basis = nullptr,
                                                   const CellSet* domain = nullptr);

/// Gradient ascent with backtracking line search and optional diagonal
/// preconditioning.  A parameter is flagged drifting when it falls by more
/// than 1 per iteration for 5 consecutive iterations while its ascent
/// direction stays bounded away from zero.
MaximizeResult maximize(const Objective& obj, const FitOptions& opts = {},
                        const std::vector<double>* start = nullptr);

/// Coordinate-wise (nonlinear Gauss-Seidel) ascent; diagnostic only — its
/// limit depends on the coordinate order when the MLE does not exist.
MaximizeResult maximize_coordinatewise(const Objective& obj, const FitOptions& opts = {});

struct EmleResult {
    std::vector<double> p;  // over I, zero off the facial set
    MuBasis basis;          // L_t basis used for the restricted fit
    MaximizeResult fit;
    double moment_residual = 0; // ‖A p - t/N‖_∞
};

/// Extended MLE on a facial set: maximize the restricted likelihood in the
/// identifiable μ_{L_t} coordinates; postconditions (moment matching within
/// tol, support = F_t) are verified and failure is an error.
EmleResult emle(const DesignMatrix& a, const Counts& counts, const CellSet& ft,
                double tol_moment = 1e-8, FitOptions opts = {});

/// Iterative proportional fitting restricted to F.  Errors name the
/// generator when an update would divide by (or zero out on) an empty
/// marginal.
std::vector<double> ipf(const Complex& cx, const DesignMatrix& a, const Counts& counts,
                        const CellSet& f, double tol = 1e-9, long max_sweeps = 100000);

/// Per-cell parameter report.
struct FitReport {
    std::uint64_t zero_cell = 0;
    std::map<std::uint64_t, double> mu_hat;       // finite estimates
    std::map<std::uint64_t, ParamStatus> status;  // per-cell classification
    double loglik = 0;
    bool converged = false;
    long iterations = 0;
    double grad_norm = 0;
    std::vector<std::uint64_t> drifting_cells;
};

/// Classification rule: estimable on F1 (or F_t when known), diverging off
/// F2 (or F_t), undetermined in between.
void classify(FitReport& report, const CellSet& f1, const CellSet& f2, bool ft_known);

/// Per-cell μ̂ values from fitted μ_L coordinates (prefix length = #params).
std::vector<double> cell_mu_values(const DesignMatrix& a, const MuBasis& basis,
                                   const std::vector<double>& mu_params);

/// log(n_i / n_0) per cell; -inf where n_i = 0.  Requires n_0 > 0.
std::map<std::uint64_t, double> naive_estimates(const Counts& counts, std::uint64_t zero_cell);

/// Appendix-style λ reparametrization from facet certificates of F_t.
struct LambdaBasis {
    std::vector<FaceCertificate> certificates; // c of them
    std::vector<std::uint64_t> l;              // basis cells, L_t prefix first
    std::size_t lt_size = 0;
    std::vector<std::vector<Rational>> g;      // c x c transform on L \ L_t
    std::vector<std::vector<Rational>> g_inv;

    /// λ from μ_L: identity on the L_t prefix, G^{-1} on the rest.
    std::vector<Rational> lambda_from_mu(const std::vector<Rational>& mu_l) const;
};

LambdaBasis lambda_reparam(const DesignMatrix& a, const CellSet& ft,
                           const std::vector<FaceCertificate>& certificates,
                           const MuBasis& basis);

/// Property check for facet-defining certificates: every j has a witness
/// cell with positive λ_j coefficient and zero coefficients for the others.
bool lambda_facet_witnesses(const DesignMatrix& a, const CellSet& ft, const LambdaBasis& lb);

} // namespace emlp
