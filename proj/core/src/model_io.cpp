#include "emlp/model_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace emlp {

using nlohmann::json;

namespace {

json parse(const std::string& text) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(std::string("json parse error: ") + e.what());
    }
}

} // namespace

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << text;
}

Model model_from_json(const std::string& text) {
    json j = parse(text);
    if (!j.contains("variables") || !j["variables"].is_array())
        throw Error("model: missing 'variables' array");
    std::vector<Variable> vars;
    for (const auto& v : j["variables"]) {
        Variable var;
        var.name = v.at("name").get<std::string>();
        if (v.contains("labels")) {
            for (const auto& l : v["labels"]) var.labels.push_back(l.get<std::string>());
        } else {
            int levels = v.value("levels", 2);
            for (int l = 0; l < levels; ++l) var.labels.push_back(std::to_string(l));
        }
        vars.push_back(std::move(var));
    }
    Model m;
    m.schema = Schema::make(std::move(vars));
    std::vector<std::vector<std::string>> gens;
    if (j.contains("generators"))
        for (const auto& g : j["generators"]) {
            std::vector<std::string> gen;
            for (const auto& name : g) gen.push_back(name.get<std::string>());
            gens.push_back(std::move(gen));
        }
    std::vector<std::string> names;
    for (int v = 0; v < m.schema.arity(); ++v) names.push_back(m.schema.name(v));
    m.complex = Complex::make(names, gens);
    if (j.contains("grid")) {
        GridInfo g;
        g.rows = j["grid"].at("rows").get<int>();
        g.cols = j["grid"].at("cols").get<int>();
        if (g.rows * g.cols != m.schema.arity())
            throw Error("model: grid size does not match the variable count");
        m.complex.set_grid(g);
    }
    return m;
}

Model load_model(const std::string& path) { return model_from_json(read_file(path)); }

std::string model_to_json(const Model& model) {
    json j;
    j["variables"] = json::array();
    for (const auto& v : model.schema.variables()) {
        bool plain = true;
        for (std::size_t l = 0; l < v.labels.size(); ++l)
            if (v.labels[l] != std::to_string(l)) plain = false;
        json jv{{"name", v.name}};
        if (plain) jv["levels"] = v.labels.size();
        else jv["labels"] = v.labels;
        j["variables"].push_back(jv);
    }
    j["generators"] = json::array();
    for (const auto& g : model.complex.generators()) {
        json jg = json::array();
        for (int v : g) jg.push_back(model.complex.vertex_name(v));
        j["generators"].push_back(jg);
    }
    if (model.complex.grid())
        j["grid"] = {{"rows", model.complex.grid()->rows}, {"cols", model.complex.grid()->cols}};
    return j.dump(2) + "\n";
}

Counts counts_from_csv(const std::string& text, const Schema& schema) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw Error("counts: empty file");
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::string cur;
        for (char c : s) {
            if (c == ',') {
                out.push_back(cur);
                cur.clear();
            } else if (c != '\r') {
                cur += c;
            }
        }
        out.push_back(cur);
        for (auto& f : out) {
            while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.erase(f.begin());
            while (!f.empty() && (f.back() == ' ' || f.back() == '\t')) f.pop_back();
        }
        return out;
    };
    auto header = split(line);
    int count_col = -1;
    std::vector<int> var_of_col(header.size(), -1);
    std::vector<bool> seen(schema.arity(), false);
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] == "count") {
            if (count_col >= 0) throw Error("counts: duplicate 'count' column");
            count_col = static_cast<int>(c);
            continue;
        }
        auto v = schema.find_var(header[c]);
        if (!v) throw Error("counts: unknown column '" + header[c] + "'");
        if (seen[*v]) throw Error("counts: duplicate column '" + header[c] + "'");
        seen[*v] = true;
        var_of_col[c] = *v;
    }
    for (int v = 0; v < schema.arity(); ++v)
        if (!seen[v]) throw Error("counts: missing column '" + schema.name(v) + "'");

    std::vector<Cell> observations;
    std::vector<std::pair<Cell, std::int64_t>> records;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        auto fields = split(line);
        if (fields.size() != header.size())
            throw Error("counts: row with " + std::to_string(fields.size()) +
                        " fields, expected " + std::to_string(header.size()));
        Cell cell(schema.arity());
        std::int64_t cnt = 1;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (static_cast<int>(c) == count_col) {
                try {
                    cnt = std::stoll(fields[c]);
                } catch (...) {
                    throw Error("counts: bad count '" + fields[c] + "'");
                }
            } else {
                int v = var_of_col[c];
                cell[v] = static_cast<std::uint8_t>(schema.level_index(v, fields[c]));
            }
        }
        if (count_col >= 0) records.emplace_back(std::move(cell), cnt);
        else observations.push_back(std::move(cell));
    }
    if (count_col >= 0) {
        if (records.empty()) throw Error("no observations");
        return Counts::from_records(records, schema);
    }
    return Counts::from_observations(observations, schema);
}

Counts load_counts(const std::string& path, const Schema& schema) {
    return counts_from_csv(read_file(path), schema);
}

namespace {

json certificate_json(const DesignMatrix& a, const FaceCertificate& cert) {
    json jc;
    jc["constant"] = to_string(Rational(-cert.gtilde[0]));
    jc["coeffs"] = json::array();
    for (int j = 0; j < a.rows(); ++j) jc["coeffs"].push_back(to_string(cert.gtilde[1 + j]));
    return jc;
}

json cells_json(const CellSet& cells) {
    json out = json::array();
    cells.for_each([&](std::uint64_t i) { out.push_back(i); });
    return out;
}

} // namespace

std::string facial_report_json(const DesignMatrix& a, const FacialSet& f,
                               std::optional<bool> mle_exists, const std::string& method) {
    json j;
    j["method"] = method;
    j["cells"] = cells_json(f.cells);
    j["size"] = f.cells.size();
    j["dimension"] = f.dimension;
    j["certificate"] = json::array();
    if (f.certificate) j["certificate"].push_back(certificate_json(a, *f.certificate));
    if (mle_exists) j["mle_exists"] = *mle_exists;
    else j["mle_exists"] = "unknown";
    j["row_labels"] = a.row_labels();
    return j.dump(2) + "\n";
}

std::string sandwich_report_json(const DesignMatrix& a, const Sandwich& s,
                                 const std::optional<FacialSet>& ft) {
    json j;
    j["method"] = "sandwich";
    j["F1"] = {{"cells", cells_json(s.f1)}, {"size", s.f1.size()}};
    j["F2"] = {{"cells", cells_json(s.f2.cells)},
               {"size", s.f2.cells.size()},
               {"dimension", s.f2.dimension}};
    if (s.f2.certificate) j["F2"]["certificate"] = certificate_json(a, *s.f2.certificate);
    j["rank_F1"] = s.rank1;
    j["rank_F2"] = s.rank2;
    j["determined"] = s.determined;
    j["codim_bound"] = s.codim_bound;
    if (ft) {
        j["Ft"] = {{"cells", cells_json(ft->cells)},
                   {"size", ft->cells.size()},
                   {"dimension", ft->dimension}};
        j["mle_exists"] = ft->cells.is_full();
    } else if (!s.f2.cells.is_full()) {
        j["mle_exists"] = false;
    } else if (s.f1.is_full()) {
        j["mle_exists"] = true;
    } else {
        j["mle_exists"] = "unknown";
    }
    return j.dump(2) + "\n";
}

std::string fit_report_json(const DesignMatrix& a, const FitReport& report,
                            const std::map<std::uint64_t, double>& naive,
                            std::optional<int> dim_f1, std::optional<int> dim_f2,
                            std::optional<int> dim_ft, std::optional<bool> mle_exists) {
    json j;
    j["zero_cell"] = report.zero_cell;
    j["loglik"] = report.loglik;
    j["converged"] = report.converged;
    j["iterations"] = report.iterations;
    j["gradient_norm"] = report.grad_norm;
    if (dim_f1) j["dim_F1"] = *dim_f1;
    if (dim_f2) j["dim_F2"] = *dim_f2;
    if (dim_ft) j["dim_Ft"] = *dim_ft;
    if (mle_exists) j["mle_exists"] = *mle_exists;
    j["drifting"] = report.drifting_cells;
    j["params"] = json::array();
    const std::uint64_t m = a.space()->size();
    for (std::uint64_t i = 0; i < m; ++i) {
        json row;
        row["cell_index"] = i;
        row["label"] = cell_to_digits(cell_from_index(i, a.schema()));
        auto nit = naive.find(i);
        if (nit != naive.end()) row["naive"] = nit->second;
        else row["naive"] = "-inf";
        auto sit = report.status.find(i);
        ParamStatus st = sit != report.status.end() ? sit->second : ParamStatus::Estimable;
        row["status"] = st == ParamStatus::Estimable     ? "estimable"
                        : st == ParamStatus::Diverges    ? "diverges"
                                                         : "undetermined";
        auto mit = report.mu_hat.find(i);
        if (st == ParamStatus::Diverges || mit == report.mu_hat.end()) row["mu_hat"] = "-inf";
        else row["mu_hat"] = mit->second;
        j["params"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

std::string implicit_to_json(const ImplicitFacialSet& s, const Schema& schema) {
    json j;
    j["cover"] = json::array();
    j["projections"] = json::array();
    for (std::size_t k = 0; k < s.cover().size(); ++k) {
        json block = json::array();
        for (int v : s.cover()[k]->vars()) block.push_back(schema.name(v));
        j["cover"].push_back(std::move(block));
        j["projections"].push_back(cells_json(s.projections()[k]));
    }
    return j.dump(2) + "\n";
}

ImplicitFacialSet implicit_from_json(const std::string& text, const Schema& schema) {
    json j = parse(text);
    std::vector<CellSpacePtr> cover;
    std::vector<CellSet> proj;
    for (std::size_t k = 0; k < j.at("cover").size(); ++k) {
        std::vector<int> vars;
        for (const auto& name : j["cover"][k]) vars.push_back(schema.var_index(name));
        auto space = CellSpace::make(schema, vars);
        std::vector<std::uint64_t> idx;
        for (const auto& i : j.at("projections").at(k)) idx.push_back(i.get<std::uint64_t>());
        proj.push_back(CellSet::of_indices(space, idx));
        cover.push_back(std::move(space));
    }
    return ImplicitFacialSet::make_checked(std::move(cover), std::move(proj));
}

SeparatorStrategy separator_strategy_from_name(const std::string& name) {
    if (name == "all-minimal" || name == "all") return SeparatorStrategy::AllMinimal;
    if (name == "min-part-size") return SeparatorStrategy::MinPartSize;
    if (name == "grid-regular") return SeparatorStrategy::GridRegular;
    throw Error("unknown separator strategy '" + name + "'");
}

CoverStrategy cover_strategy_from_name(const std::string& name) {
    if (name == "fixed-k") return CoverStrategy::FixedK;
    if (name == "balls") return CoverStrategy::Balls;
    if (name == "grid-3x3-all") return CoverStrategy::Grid3x3All;
    if (name == "grid-3x3-cover") return CoverStrategy::Grid3x3Cover;
    throw Error("unknown cover strategy '" + name + "'");
}

StrategyConfig strategy_from_json(const std::string& text) {
    json j = parse(text);
    StrategyConfig cfg;
    if (j.contains("inner")) {
        const auto& i = j["inner"];
        if (i.contains("strategy"))
            cfg.inner_strategy = separator_strategy_from_name(i["strategy"].get<std::string>());
        cfg.inner_k = i.value("k", cfg.inner_k);
        cfg.inner_max_rounds = i.value("max_rounds", cfg.inner_max_rounds);
        cfg.inner_complete_parts = i.value("complete_parts", cfg.inner_complete_parts);
    }
    if (j.contains("outer")) {
        const auto& o = j["outer"];
        if (o.contains("strategy"))
            cfg.outer_strategy = cover_strategy_from_name(o["strategy"].get<std::string>());
        cfg.outer_k = o.value("k", cfg.outer_k);
    }
    return cfg;
}

ExperimentConfig experiment_from_json(const std::string& text, const std::string& base_dir) {
    json j = parse(text);
    ExperimentConfig cfg;
    if (!j.contains("model")) throw Error("experiment: missing 'model'");
    Model m;
    if (j["model"].is_string()) {
        std::string path = j["model"].get<std::string>();
        if (!path.empty() && path[0] != '/') path = base_dir + "/" + path;
        m = load_model(path);
    } else if (j["model"].is_object() && j["model"].contains("grid") &&
               !j["model"].contains("variables")) {
        int rows = j["model"]["grid"].at("rows").get<int>();
        int cols = j["model"]["grid"].at("cols").get<int>();
        m.complex = grid_complex(rows, cols);
        m.schema = Schema::uniform(m.complex.vertices(), 2);
    } else {
        m = model_from_json(j["model"].dump());
    }
    cfg.model = std::move(m.complex);
    cfg.schema = std::move(m.schema);
    std::string theta = j.value("theta", std::string("std-normal"));
    if (theta == "std-normal") cfg.theta = ThetaSource::StdNormal;
    else if (theta == "zero" || theta == "uniform") cfg.theta = ThetaSource::Zero;
    else throw Error("experiment: unknown theta source '" + theta + "'");
    if (!j.contains("sample_sizes")) throw Error("experiment: missing 'sample_sizes'");
    for (const auto& n : j["sample_sizes"]) cfg.sample_sizes.push_back(n.get<std::uint64_t>());
    cfg.replicates = j.value("replicates", cfg.replicates);
    cfg.seed = j.value("seed", cfg.seed);
    if (j.contains("methods")) {
        cfg.run_exact = cfg.run_inner = cfg.run_outer = false;
        for (const auto& m2 : j["methods"]) {
            std::string name = m2.get<std::string>();
            if (name == "exact") cfg.run_exact = true;
            else if (name == "inner") cfg.run_inner = true;
            else if (name == "outer") cfg.run_outer = true;
            else throw Error("experiment: unknown method '" + name + "'");
        }
    }
    if (j.contains("strategies")) {
        StrategyConfig s = strategy_from_json(j["strategies"].dump());
        cfg.inner_strategy = s.inner_strategy;
        cfg.inner_k = s.inner_k;
        cfg.inner_max_rounds = s.inner_max_rounds;
        cfg.inner_complete_parts = s.inner_complete_parts;
        cfg.outer_strategy = s.outer_strategy;
        cfg.outer_k = s.outer_k;
    }
    cfg.implicit_mode = j.value("implicit", false);
    cfg.threads = j.value("threads", 0);
    std::string lp = j.value("lp_mode", std::string("float"));
    cfg.lp_mode = lp == "exact" ? LPMode::Exact : LPMode::Float;
    cfg.include_timing = j.value("include_timing", true);
    return cfg;
}

std::string experiment_rows_json(const std::vector<ExperimentRow>& rows, bool include_timing) {
    json j = json::array();
    for (const auto& r : rows) {
        json row;
        row["sample_size"] = r.sample_size;
        row["n_reps"] = r.n_reps;
        row["frac_nonexist"] = r.frac_nonexist;
        if (r.frac_f1_eq_ft >= 0) row["frac_F1_eq_Ft"] = r.frac_f1_eq_ft;
        if (r.frac_f2_eq_ft >= 0) row["frac_F2_eq_Ft"] = r.frac_f2_eq_ft;
        if (r.frac_f1_eq_f2 >= 0) row["frac_F1_eq_F2"] = r.frac_f1_eq_f2;
        if (r.mean_inner_rounds >= 0) row["mean_inner_rounds"] = r.mean_inner_rounds;
        if (r.frac_rounds_le3 >= 0) row["frac_rounds_le3"] = r.frac_rounds_le3;
        row["mean_runtime_ms"] = include_timing ? r.mean_runtime_ms : 0.0;
        j.push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

} // namespace emlp
