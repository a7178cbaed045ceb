#pragma once

#include <optional>
#include <string>

#include "emlp/approx.hpp"
#include "emlp/complex.hpp"
#include "emlp/counts.hpp"
#include "emlp/estimate.hpp"
#include "emlp/facial.hpp"
#include "emlp/implicit.hpp"
#include "emlp/schema.hpp"
#include "emlp/sim.hpp"

namespace emlp {

struct Model {
    Schema schema;
    Complex complex;
};

/// Model file: {"variables":[{"name":"a","levels":2}|{"name":"a","labels":[..]}...],
///              "generators":[["a","b"],...], "grid":{"rows":4,"cols":4}?}
Model model_from_json(const std::string& text);
Model load_model(const std::string& path);
std::string model_to_json(const Model& model);

/// Counts CSV: header `var1,...,varp,count` (aggregated) or `var1,...,varp`
/// (one row per observation); values are level labels.
Counts counts_from_csv(const std::string& text, const Schema& schema);
Counts load_counts(const std::string& path, const Schema& schema);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

/// {"cells":[...]|"implicit", "size", "dimension", "certificate":[{coeffs,
///  constant}], "mle_exists"} plus row labels.
std::string facial_report_json(const DesignMatrix& a, const FacialSet& f,
                               std::optional<bool> mle_exists, const std::string& method);

std::string sandwich_report_json(const DesignMatrix& a, const Sandwich& s,
                                 const std::optional<FacialSet>& ft);

std::string fit_report_json(const DesignMatrix& a, const FitReport& report,
                            const std::map<std::uint64_t, double>& naive,
                            std::optional<int> dim_f1, std::optional<int> dim_f2,
                            std::optional<int> dim_ft, std::optional<bool> mle_exists);

/// {"cover":[[variable names]...], "projections":[[cell indices]...]}
std::string implicit_to_json(const ImplicitFacialSet& s, const Schema& schema);
ImplicitFacialSet implicit_from_json(const std::string& text, const Schema& schema);

struct StrategyConfig {
    SeparatorStrategy inner_strategy = SeparatorStrategy::MinPartSize;
    int inner_k = 3;
    int inner_max_rounds = 10;
    bool inner_complete_parts = false;
    CoverStrategy outer_strategy = CoverStrategy::FixedK;
    int outer_k = 5;
};

/// {"inner":{"strategy":"min-part-size","k":3,"max_rounds":10},
///  "outer":{"strategy":"fixed-k","k":5}}
StrategyConfig strategy_from_json(const std::string& text);

SeparatorStrategy separator_strategy_from_name(const std::string& name);
CoverStrategy cover_strategy_from_name(const std::string& name);

/// experiment.json; model may be a path (relative to base_dir), an inline
/// model object, or {"grid":{"rows":r,"cols":c}}.
ExperimentConfig experiment_from_json(const std::string& text, const std::string& base_dir);

std::string experiment_rows_json(const std::vector<ExperimentRow>& rows, bool include_timing);

} // namespace emlp
