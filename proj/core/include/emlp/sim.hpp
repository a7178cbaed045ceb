#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "emlp/approx.hpp"
#include "emlp/complex.hpp"
#include "emlp/counts.hpp"
#include "emlp/design.hpp"
#include "emlp/implicit.hpp"

namespace emlp {

/// Counter-mode SplitMix64: output i of a stream is the SplitMix64
/// finalizer applied to key + i * golden-gamma, with the key derived from
/// (seed, stream).  Streams are independent, draws are reproducible and
/// splittable by replicate.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t next_u64();
    double next_unit();     // [0, 1)
    double next_gaussian(); // standard normal (Box-Muller)

private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    bool have_spare_ = false;
    double spare_ = 0;
};

/// p_θ over the full cell space (stable log-sum-exp normalization).
std::vector<double> model_probabilities(const DesignMatrix& a, const std::vector<double>& theta);

/// N iid draws from p_θ (inverse-CDF on the cell index order).
Counts sample_counts(const DesignMatrix& a, const std::vector<double>& theta, std::uint64_t n,
                     CounterRng& rng);

/// Exact forward sampler along a chain of separator blocks.  The block
/// potentials carry the model's faces, so with the completion parameters at
/// zero the sampled law is exactly p_θ; cell spaces above the explicit cap
/// never materialize.
class ChainSampler {
public:
    ChainSampler(const Complex& cx, const Schema& schema, const ChainFamily& family,
                 const DesignMatrix& rows_index, const std::vector<double>& theta);

    Cell draw(CounterRng& rng) const;
    Counts sample(std::uint64_t n, CounterRng& rng) const;

    /// Probability of a full cell under the chain factorization (for
    /// cross-checks against direct enumeration at desk scale).
    double probability(const Cell& cell) const;

private:
    const Schema* schema_;
    std::vector<std::vector<int>> blocks_;
    std::vector<CellSpacePtr> spaces_;
    std::vector<CellSpacePtr> left_sep_, right_sep_;
    std::vector<std::vector<double>> logpot_;  // per block
    std::vector<std::vector<double>> message_; // backward, over right separator
    double log_norm_ = 0;
};

enum class ThetaSource { StdNormal, Zero };

struct ExperimentConfig {
    Complex model;
    Schema schema;
    ThetaSource theta = ThetaSource::StdNormal;
    std::vector<std::uint64_t> sample_sizes;
    int replicates = 100;
    std::uint64_t seed = 0;
    bool run_exact = true;
    bool run_inner = true;
    bool run_outer = true;
    // explicit-mode strategies
    SeparatorStrategy inner_strategy = SeparatorStrategy::GridRegular;
    int inner_k = 3;
    int inner_max_rounds = 10;
    bool inner_complete_parts = false;
    CoverStrategy outer_strategy = CoverStrategy::Grid3x3All;
    int outer_k = 5;
    // implicit mode (two parallel separator families on a grid)
    bool implicit_mode = false;
    int threads = 0;
    LPMode lp_mode = LPMode::Float;
    bool include_timing = true; // timing column is not byte-reproducible
};

struct ExperimentRow {
    std::uint64_t sample_size = 0;
    int n_reps = 0;
    double frac_nonexist = 0;  // implicit mode: fraction with F2 != I
    double frac_f1_eq_ft = -1; // -1 when not computed
    double frac_f2_eq_ft = -1;
    double frac_f1_eq_f2 = -1;
    double mean_runtime_ms = 0;
    double mean_inner_rounds = -1; // implicit mode only
    double frac_rounds_le3 = -1;   // implicit mode only
};

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg);

std::string experiment_csv(const std::vector<ExperimentRow>& rows, bool include_timing);

/// Vertical separator columns for grid two-family runs: interior columns
/// 3,5,... (blue) and 2,4,... (red), as vertex sets.
std::pair<std::vector<std::vector<int>>, std::vector<std::vector<int>>>
grid_two_families(const Complex& cx);

} // namespace emlp
