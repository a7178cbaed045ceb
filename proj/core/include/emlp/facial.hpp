#pragma once

#include <optional>
#include <string>
#include <vector>

#include "emlp/cellset.hpp"
#include "emlp/counts.hpp"
#include "emlp/design.hpp"
#include "emlp/linprog.hpp"

namespace emlp {

/// Homogenized face certificate: <g̃, f̃_i> = 0 on the facial set and > 0 off
/// it.  Decodes as (-c, g) for the tight inequality <g, x> >= c.
struct FaceCertificate {
    std::vector<Rational> gtilde;
};

struct FacialSet {
    CellSet cells;
    int dimension = -1; // rank Ã_F - 1; -1 when not computed
    std::optional<FaceCertificate> certificate;
};

struct Verdict {
    bool mle_exists = false;
    FacialSet facial_set;
    std::string method; // "exact-lp" or "oracle"
};

/// Facial-set computations for one design matrix.  Float mode searches with
/// a double-precision simplex and certifies every step in exact rational
/// arithmetic; exact mode runs the rational simplex throughout.  Either way
/// the returned sets and certificates are exact.
class FacialSolver {
public:
    explicit FacialSolver(const DesignMatrix& a, LPMode mode = LPMode::Float);

    const DesignMatrix& design() const { return a_; }

    /// Smallest facial set containing S (Appendix-style iterative LP).
    CellSet closure(const CellSet& s);

    /// Closure plus exact certificate and face dimension.
    FacialSet closure_full(const CellSet& s);

    /// Closure plus certificate, skipping the rank computation.
    FacialSet closure_cert(const CellSet& s);

    /// True iff F is a facial set; optionally returns an exact certificate
    /// (for proper F).
    bool is_facial(const CellSet& f, FaceCertificate* cert = nullptr);

private:
    const DesignMatrix& a_;
    LPMode mode_;
    std::optional<detail::Int8RowMatrix> rows_; // one row per cell: f̃_iᵀ
    void ensure_rows();
    CellSet closure_impl_(const CellSet& s, FaceCertificate* cert_out);
};

FacialSet facial_closure(const DesignMatrix& a, const CellSet& s, LPMode mode = LPMode::Float);
Verdict facial_set_of_data(const DesignMatrix& a, const Counts& counts,
                           LPMode mode = LPMode::Float);
bool is_facial(const DesignMatrix& a, const CellSet& f, LPMode mode = LPMode::Float);

/// Exact validation: cert vanishes on F and is strictly positive off F.
bool verify_certificate(const DesignMatrix& a, const CellSet& f, const FaceCertificate& cert);

} // namespace emlp
