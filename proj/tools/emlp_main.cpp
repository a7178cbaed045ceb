// emlp: facial sets of marginal polytopes, extended MLEs and inner/outer
// approximations for hierarchical log-linear models.
//
// Exit codes for `check`: 0 the MLE provably exists, 3 it provably does not
// (the report carries the facial set or sandwich), 2 the chosen method
// cannot decide, 1 error.

#include <cmath>
#include <cstdio>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "emlp/approx.hpp"
#include "emlp/design.hpp"
#include "emlp/estimate.hpp"
#include "emlp/facial.hpp"
#include "emlp/implicit.hpp"
#include "emlp/linprog.hpp"
#include "emlp/model_io.hpp"
#include "emlp/parallel.hpp"
#include "emlp/sim.hpp"

using namespace emlp;

namespace {

struct CheckOpts {
    std::string model_path, data_path, out_path;
    std::string method = "exact";
    std::string strategies_path;
    std::string inner_strategy, outer_strategy;
    int inner_k = -1, outer_k = -1, max_rounds = -1;
    bool implicit = false;
    bool complete_parts = false;
    int threads = 0;
    std::string lp = "float";
};

LPMode lp_mode_of(const std::string& name) {
    if (name == "float") return LPMode::Float;
    if (name == "exact") return LPMode::Exact;
    throw Error("unknown LP mode '" + name + "' (use float or exact)");
}

StrategyConfig effective_strategies(const CheckOpts& o, const Complex& cx) {
    StrategyConfig cfg;
    cfg.outer_k = std::min(5, cx.num_vertices());
    if (!o.strategies_path.empty()) cfg = strategy_from_json(read_file(o.strategies_path));
    if (!o.inner_strategy.empty())
        cfg.inner_strategy = separator_strategy_from_name(o.inner_strategy);
    if (!o.outer_strategy.empty()) cfg.outer_strategy = cover_strategy_from_name(o.outer_strategy);
    if (o.inner_k >= 0) cfg.inner_k = o.inner_k;
    if (o.outer_k >= 0) cfg.outer_k = o.outer_k;
    if (o.max_rounds >= 0) cfg.inner_max_rounds = o.max_rounds;
    if (o.complete_parts) cfg.inner_complete_parts = true;
    return cfg;
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty()) std::cout << text;
    else write_file(out_path, text);
}

int cmd_check(const CheckOpts& o) {
    Model m = load_model(o.model_path);
    Counts counts = load_counts(o.data_path, m.schema);
    LPMode mode = lp_mode_of(o.lp);

    if (o.implicit) {
        auto [blue, red] = grid_two_families(m.complex);
        StrategyConfig cfg = effective_strategies(o, m.complex);
        auto tf = iterate_two_families(m.complex, m.schema, counts, blue, red,
                                       cfg.inner_max_rounds, mode);
        nlohmann::json j;
        j["method"] = "implicit";
        j["inner"] = nlohmann::json::parse(implicit_to_json(tf.inner, m.schema));
        j["outer"] = nlohmann::json::parse(implicit_to_json(tf.outer, m.schema));
        j["inner_rounds"] = tf.rounds;
        j["inner_stable"] = tf.stable;
        j["F2_proper"] = !tf.outer.is_full();
        j["F1_eq_F2"] = tf.inner.equals(tf.outer);
        if (!tf.outer.is_full()) j["mle_exists"] = false;
        else if (tf.inner.is_full()) j["mle_exists"] = true;
        else j["mle_exists"] = "unknown";
        emit(o.out_path, j.dump(2) + "\n");
        if (!tf.outer.is_full()) return 3;
        return tf.inner.is_full() ? 0 : 2;
    }

    auto cells = m.schema.cell_count();
    if (!cells || *cells > kExplicitCap)
        throw CapExceeded("cell space exceeds the explicit cap " + std::to_string(kExplicitCap) +
                          "; use --implicit for chain-structured models");
    DesignMatrix design(m.complex, m.schema);
    CellSet support = counts.support_set(design.space());
    StrategyConfig cfg = effective_strategies(o, m.complex);

    if (o.method == "exact") {
        FacialSolver solver(design, mode);
        FacialSet f = solver.closure_full(support);
        bool exists = f.cells.is_full();
        emit(o.out_path, facial_report_json(design, f, exists, "exact-lp"));
        return exists ? 0 : 3;
    }
    if (o.method == "inner") {
        auto splits = enumerate_separators(m.complex, cfg.inner_strategy, cfg.inner_k).splits;
        auto inner = inner_approx(m.complex, m.schema, support, splits, cfg.inner_max_rounds,
                                  cfg.inner_complete_parts, mode);
        FacialSet f{inner.f1, face_dimension(design, inner.f1), std::nullopt};
        bool full = f.cells.is_full();
        emit(o.out_path,
             facial_report_json(design, f, full ? std::optional<bool>(true) : std::nullopt,
                                "inner"));
        return full ? 0 : 2;
    }
    if (o.method == "outer") {
        auto cover = cover_from_strategy(m.complex, cfg.outer_strategy, cfg.outer_k);
        FacialSet f2 = outer_approx(m.complex, m.schema, support, cover, mode);
        bool proper = !f2.cells.is_full();
        emit(o.out_path,
             facial_report_json(design, f2, proper ? std::optional<bool>(false) : std::nullopt,
                                "outer"));
        return proper ? 3 : 2;
    }
    if (o.method == "sandwich") {
        auto splits = enumerate_separators(m.complex, cfg.inner_strategy, cfg.inner_k).splits;
        auto inner = inner_approx(m.complex, m.schema, support, splits, cfg.inner_max_rounds,
                                  cfg.inner_complete_parts, mode);
        auto cover = cover_from_strategy(m.complex, cfg.outer_strategy, cfg.outer_k);
        FacialSet f2 = outer_approx(m.complex, m.schema, support, cover, mode);
        Sandwich s = compare(design, inner.f1, std::move(f2));
        emit(o.out_path, sandwich_report_json(design, s, std::nullopt));
        if (!s.f2.cells.is_full()) return 3;
        return s.f1.is_full() ? 0 : 2;
    }
    throw Error("unknown method '" + o.method + "' (exact|inner|outer|sandwich)");
}

struct FitOpts {
    std::string model_path, data_path, out_path;
    std::string kind = "mle"; // mle | emle | restricted-f2
    std::string strategies_path;
    double tol_grad = 1e-8;
    double tol_moment = 1e-8;
    long max_iter = 10000;
    std::string lp = "float";
};

int cmd_fit(const FitOpts& o) {
    Model m = load_model(o.model_path);
    Counts counts = load_counts(o.data_path, m.schema);
    LPMode mode = lp_mode_of(o.lp);
    DesignMatrix design(m.complex, m.schema);
    CellSet support = counts.support_set(design.space());
    CellSet full = CellSet::full(design.space());
    FitOptions fopts;
    fopts.tol_grad = o.tol_grad;
    fopts.max_iter = o.max_iter;

    FitReport report;
    std::optional<int> dim_f1, dim_f2, dim_ft;
    std::optional<bool> exists;

    if (o.kind == "mle") {
        MuBasis basis = MuBasis::select(design, counts, full, full);
        Objective obj = make_likelihood(design, counts, LikelihoodForm::Mu, &basis, &full);
        MaximizeResult res = maximize(obj, fopts);
        auto mu = cell_mu_values(design, basis, res.x);
        report.zero_cell = basis.zero_cell();
        for (std::uint64_t i = 0; i < mu.size(); ++i) report.mu_hat[i] = mu[i];
        classify(report, full, full, false);
        report.loglik = res.value;
        report.converged = res.converged;
        report.iterations = res.iterations;
        report.grad_norm = res.grad_norm;
        for (int k : res.drifting) report.drifting_cells.push_back(basis.l()[k]);
        auto naive = naive_estimates(counts, basis.zero_cell());
        emit(o.out_path, fit_report_json(design, report, naive, dim_f1, dim_f2, dim_ft, exists));
        return 0;
    }
    if (o.kind == "emle") {
        FacialSolver solver(design, mode);
        FacialSet ft = solver.closure_full(support);
        EmleResult res = emle(design, counts, ft.cells, o.tol_moment, fopts);
        report.zero_cell = res.basis.zero_cell();
        double p0 = res.p[res.basis.zero_cell()];
        ft.cells.for_each([&](std::uint64_t i) {
            report.mu_hat[i] = std::log(res.p[i] / p0);
        });
        classify(report, ft.cells, ft.cells, true);
        report.loglik = res.fit.value;
        report.converged = res.fit.converged;
        report.iterations = res.fit.iterations;
        report.grad_norm = res.fit.grad_norm;
        dim_ft = ft.dimension;
        exists = ft.cells.is_full();
        auto naive = naive_estimates(counts, res.basis.zero_cell());
        emit(o.out_path, fit_report_json(design, report, naive, dim_f1, dim_f2, dim_ft, exists));
        return 0;
    }
    if (o.kind == "restricted-f2") {
        StrategyConfig cfg;
        cfg.outer_k = std::min(5, m.complex.num_vertices());
        if (!o.strategies_path.empty()) cfg = strategy_from_json(read_file(o.strategies_path));
        auto splits = enumerate_separators(m.complex, cfg.inner_strategy, cfg.inner_k).splits;
        CellSet f1 = inner_approx(m.complex, m.schema, support, splits, cfg.inner_max_rounds,
                                  cfg.inner_complete_parts, mode)
                         .f1;
        auto cover = cover_from_strategy(m.complex, cfg.outer_strategy, cfg.outer_k);
        FacialSet f2 = outer_approx(m.complex, m.schema, support, cover, mode);
        MuBasis basis = MuBasis::select(design, counts, f1, f2.cells);
        Objective obj =
            make_likelihood(design, counts, LikelihoodForm::MuOnF2, &basis, &f2.cells);
        MaximizeResult res = maximize(obj, fopts);
        auto mu = cell_mu_values(design, basis, res.x);
        report.zero_cell = basis.zero_cell();
        f2.cells.for_each([&](std::uint64_t i) { report.mu_hat[i] = mu[i]; });
        classify(report, f1, f2.cells, false);
        report.loglik = res.value;
        report.converged = res.converged;
        report.iterations = res.iterations;
        report.grad_norm = res.grad_norm;
        for (int k : res.drifting) report.drifting_cells.push_back(basis.l()[k]);
        dim_f1 = face_dimension(design, f1);
        dim_f2 = f2.dimension;
        if (!f2.cells.is_full()) exists = false;
        auto naive = naive_estimates(counts, basis.zero_cell());
        emit(o.out_path, fit_report_json(design, report, naive, dim_f1, dim_f2, dim_ft, exists));
        return 0;
    }
    throw Error("unknown fit kind '" + o.kind + "' (mle|emle|restricted-f2)");
}

struct SimOpts {
    std::string config_path, out_path = "summary.csv";
    int threads = -1;
    std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimOpts& o) {
    std::string base = ".";
    auto pos = o.config_path.find_last_of('/');
    if (pos != std::string::npos) base = o.config_path.substr(0, pos);
    ExperimentConfig cfg = experiment_from_json(read_file(o.config_path), base);
    if (o.threads >= 0) cfg.threads = o.threads;
    if (o.seed) cfg.seed = *o.seed;
    auto rows = run_experiment(cfg);
    write_file(o.out_path, experiment_csv(rows, cfg.include_timing));
    std::string json_path = o.out_path;
    auto dot = json_path.find_last_of('.');
    json_path = (dot == std::string::npos ? json_path : json_path.substr(0, dot)) + ".json";
    write_file(json_path, experiment_rows_json(rows, cfg.include_timing));
    std::cout << experiment_csv(rows, cfg.include_timing);
    return 0;
}

struct ModelOpts {
    std::string grid;
    std::string model_path;
    std::string out_path;
    bool info = false;
};

int cmd_model(const ModelOpts& o) {
    if (!o.grid.empty()) {
        int rows = 0, cols = 0;
        if (std::sscanf(o.grid.c_str(), "%dx%d", &rows, &cols) != 2)
            throw Error("--grid expects ROWSxCOLS, e.g. 4x4");
        Model m;
        m.complex = grid_complex(rows, cols);
        m.schema = Schema::uniform(m.complex.vertices(), 2);
        emit(o.out_path, model_to_json(m));
        return 0;
    }
    if (o.model_path.empty()) throw Error("model: provide --grid or --model");
    Model m = load_model(o.model_path);
    nlohmann::json j;
    j["variables"] = m.schema.arity();
    j["generators"] = m.complex.generators().size();
    double log_cells = 0;
    for (int v = 0; v < m.schema.arity(); ++v) log_cells += std::log2(double(m.schema.levels(v)));
    j["log2_cells"] = log_cells;
    DesignMatrix design(m.complex, m.schema);
    j["parameters"] = design.rows();
    auto dec = is_decomposable(m.complex);
    j["decomposable"] = dec.decomposable;
    if (!dec.decomposable) j["decomposable_diagnostic"] = dec.diagnostic;
    auto prime = prime_components(m.complex);
    j["prime_components"] = prime.components.size();
    auto seps = enumerate_separators(m.complex, SeparatorStrategy::AllMinimal, 0, 10000);
    j["minimal_separators"] = seps.splits.size();
    j["separator_enumeration_truncated"] = seps.truncated;
    if (m.complex.grid())
        j["grid"] = {{"rows", m.complex.grid()->rows}, {"cols", m.complex.grid()->cols}};
    emit(o.out_path, j.dump(2) + "\n");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"facial sets and extended maximum likelihood for hierarchical "
                 "log-linear models"};
    app.require_subcommand(1);

    CheckOpts co;
    auto* check = app.add_subcommand("check", "decide MLE existence / compute facial sets");
    check->add_option("--model", co.model_path, "model JSON file")->required();
    check->add_option("--data", co.data_path, "counts CSV file")->required();
    check->add_option("--method", co.method, "exact|inner|outer|sandwich");
    check->add_option("--strategies", co.strategies_path, "strategy config JSON");
    check->add_option("--inner-strategy", co.inner_strategy, "all-minimal|min-part-size|grid-regular");
    check->add_option("--outer-strategy", co.outer_strategy,
                      "fixed-k|balls|grid-3x3-all|grid-3x3-cover");
    check->add_option("--inner-k", co.inner_k, "min part size for inner separators");
    check->add_option("--outer-k", co.outer_k, "subset size for fixed-k covers");
    check->add_option("--max-rounds", co.max_rounds, "inner iteration cap");
    check->add_flag("--implicit", co.implicit, "two-family implicit mode (grid models)");
    check->add_flag("--complete-parts", co.complete_parts,
                    "use the cheaper both-parts completion for the inner step");
    check->add_option("--threads", co.threads, "worker threads (0 = hardware)");
    check->add_option("--lp", co.lp, "LP mode: float|exact");
    check->add_option("--out", co.out_path, "report path (default stdout)");

    FitOpts fo;
    auto* fit = app.add_subcommand("fit", "fit parameters (MLE / EMLE / restricted)");
    fit->add_option("--model", fo.model_path, "model JSON file")->required();
    fit->add_option("--data", fo.data_path, "counts CSV file")->required();
    fit->add_option("--kind", fo.kind, "mle|emle|restricted-f2");
    fit->add_option("--strategies", fo.strategies_path, "strategy config JSON");
    fit->add_option("--tol-grad", fo.tol_grad, "gradient tolerance");
    fit->add_option("--tol-moment", fo.tol_moment, "EMLE moment-matching tolerance");
    fit->add_option("--max-iter", fo.max_iter, "iteration cap");
    fit->add_option("--lp", fo.lp, "LP mode: float|exact");
    fit->add_option("--out", fo.out_path, "report path (default stdout)");

    SimOpts so;
    auto* sim = app.add_subcommand("simulate", "run a seeded simulation study");
    sim->add_option("--config", so.config_path, "experiment JSON config")->required();
    sim->add_option("--out", so.out_path, "summary CSV path");
    sim->add_option("--threads", so.threads, "worker threads (0 = hardware)");
    std::uint64_t seed_val = 0;
    auto* seed_opt = sim->add_option("--seed", seed_val, "override the config seed");

    ModelOpts mo;
    auto* model = app.add_subcommand("model", "create or inspect model files");
    model->add_option("--grid", mo.grid, "emit a binary grid model, e.g. --grid 4x4");
    model->add_option("--model", mo.model_path, "model JSON to inspect");
    model->add_flag("--info", mo.info, "print model facts");
    model->add_option("--out", mo.out_path, "output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (check->parsed()) return cmd_check(co);
        if (fit->parsed()) return cmd_fit(fo);
        if (sim->parsed()) {
            if (seed_opt->count()) so.seed = seed_val;
            return cmd_simulate(so);
        }
        if (model->parsed()) return cmd_model(mo);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
