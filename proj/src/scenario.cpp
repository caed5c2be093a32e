#include "diffinc/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>

#include "diffinc/errors.hpp"
#include "diffinc/variational.hpp"

namespace diffinc {

namespace {

using nlohmann::json;

constexpr const char* kind_names[] = {"theorem31", "theorem41", "section42",
                                      "theorem42", "corollary32", "theorem11"};

bool is_theorem_kind(ScenarioKind k) {
    return k == ScenarioKind::theorem31 || k == ScenarioKind::theorem41 ||
           k == ScenarioKind::section42 || k == ScenarioKind::theorem42;
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json finite_or_null(double x) {
    if (!std::isfinite(x)) return json();
    return json(x);
}

void expect_keys(const json& j, std::initializer_list<const char*> allowed, const char* context) {
    if (!j.is_object()) throw ValidationError(std::string(context) + ": expected an object");
    for (const auto& item : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (item.key() == a) ok = true;
        if (!ok) throw ValidationError(std::string(context) + ": unknown key '" + item.key() + "'");
    }
}

double get_number(const json& j, const char* key, const char* context) {
    if (!j.contains(key)) throw ValidationError(std::string(context) + ": missing '" + key + "'");
    if (!j.at(key).is_number()) throw ValidationError(std::string(context) + ": '" + key + "' must be a number");
    return j.at(key).get<double>();
}

long get_integer(const json& j, const char* key, const char* context) {
    if (!j.contains(key)) throw ValidationError(std::string(context) + ": missing '" + key + "'");
    if (!j.at(key).is_number_integer())
        throw ValidationError(std::string(context) + ": '" + key + "' must be an integer");
    return j.at(key).get<long>();
}

std::optional<DeclaredBound> parse_declared_bound(const json& parent, const char* key) {
    if (!parent.contains(key)) return std::nullopt;
    const json& j = parent.at(key);
    expect_keys(j, {"c", "R"}, key);
    return DeclaredBound{get_number(j, "c", key), get_number(j, "R", key)};
}

PiecewiseNonlinearity parse_nonlinearity(const json& j) {
    expect_keys(j, {"breakpoints", "segments", "asymptotic", "linear_asymptotic"}, "nonlinearity_spec");
    if (!j.contains("breakpoints") || !j.at("breakpoints").is_array())
        throw ValidationError("nonlinearity_spec: 'breakpoints' must be an array of numbers");
    if (!j.contains("segments") || !j.at("segments").is_array())
        throw ValidationError("nonlinearity_spec: 'segments' must be an array of coefficient arrays");
    std::vector<double> breakpoints;
    for (const json& b : j.at("breakpoints")) {
        if (!b.is_number()) throw ValidationError("nonlinearity_spec: breakpoints must be numbers");
        breakpoints.push_back(b.get<double>());
    }
    std::vector<Polynomial> segments;
    for (const json& s : j.at("segments")) {
        if (!s.is_array()) throw ValidationError("nonlinearity_spec: each segment is a coefficient array");
        std::vector<double> coeffs;
        for (const json& c : s) {
            if (!c.is_number()) throw ValidationError("nonlinearity_spec: coefficients must be numbers");
            coeffs.push_back(c.get<double>());
        }
        segments.emplace_back(std::move(coeffs));
    }
    return PiecewiseNonlinearity(std::move(breakpoints), std::move(segments),
                                 parse_declared_bound(j, "asymptotic"),
                                 parse_declared_bound(j, "linear_asymptotic"));
}

struct ParsedMatrix {
    std::string type;
    SpdMatrix matrix;
    std::optional<GridShape> grid;
    std::optional<double> a;
    std::optional<double> b;
};

ParsedMatrix parse_matrix(const json& j) {
    expect_keys(j, {"type", "size", "a", "b", "m", "n", "entries"}, "matrix_spec");
    if (!j.contains("type") || !j.at("type").is_string())
        throw ValidationError("matrix_spec: missing string 'type'");
    const std::string type = j.at("type").get<std::string>();
    try {
        if (type == "tridiagonal") {
            const int T = static_cast<int>(get_integer(j, "size", "matrix_spec"));
            const double a = get_number(j, "a", "matrix_spec");
            const double b = get_number(j, "b", "matrix_spec");
            return ParsedMatrix{type, build_tridiagonal(T, a, b), std::nullopt, a, b};
        }
        if (type == "second_order") {
            const int T = static_cast<int>(get_integer(j, "size", "matrix_spec"));
            SpdMatrix m = build_second_order(T);
            if (T >= 2) return ParsedMatrix{type, std::move(m), std::nullopt, -1.0, 2.0};
            return ParsedMatrix{type, std::move(m), std::nullopt, std::nullopt, std::nullopt};
        }
        if (type == "fourth_order") {
            const int T = static_cast<int>(get_integer(j, "size", "matrix_spec"));
            return ParsedMatrix{type, build_fourth_order(T), std::nullopt, std::nullopt, std::nullopt};
        }
        if (type == "grid") {
            const GridShape shape{static_cast<int>(get_integer(j, "m", "matrix_spec")),
                                  static_cast<int>(get_integer(j, "n", "matrix_spec"))};
            return ParsedMatrix{type, build_grid_laplacian(shape), shape, std::nullopt, std::nullopt};
        }
        if (type == "explicit") {
            if (!j.contains("entries") || !j.at("entries").is_array())
                throw ValidationError("matrix_spec: 'entries' must be an array of rows");
            std::vector<double> entries;
            const json& rows = j.at("entries");
            const int order = static_cast<int>(rows.size());
            for (const json& row : rows) {
                if (!row.is_array() || static_cast<int>(row.size()) != order)
                    throw ValidationError("matrix_spec: 'entries' must be square");
                for (const json& e : row) {
                    if (!e.is_number()) throw ValidationError("matrix_spec: entries must be numbers");
                    entries.push_back(e.get<double>());
                }
            }
            return ParsedMatrix{type, SpdMatrix(order, std::move(entries)), std::nullopt, std::nullopt,
                                std::nullopt};
        }
    } catch (const ValidationError&) {
        throw;
    } catch (const Error& e) {
        // Constructor rejections (admissibility, symmetry, definiteness) are
        // semantic input errors at this level.
        throw ValidationError(std::string("matrix_spec: ") + e.what());
    }
    throw ValidationError("matrix_spec: unknown type '" + type + "'");
}

SolveConfig parse_solve(const json& doc) {
    SolveConfig cfg;
    if (!doc.contains("solve")) return cfg;
    const json& j = doc.at("solve");
    expect_keys(j,
                {"tol_residual", "tol_distinct", "starts", "seed", "max_iters", "step_init", "path_nodes"},
                "solve");
    if (j.contains("tol_residual")) cfg.tol_residual = get_number(j, "tol_residual", "solve");
    if (j.contains("tol_distinct")) cfg.tol_distinct = get_number(j, "tol_distinct", "solve");
    if (j.contains("starts")) cfg.starts = static_cast<int>(get_integer(j, "starts", "solve"));
    if (j.contains("seed")) cfg.seed = static_cast<uint64_t>(get_integer(j, "seed", "solve"));
    if (j.contains("max_iters")) cfg.max_iters = get_integer(j, "max_iters", "solve");
    if (j.contains("step_init")) cfg.step_init = get_number(j, "step_init", "solve");
    if (j.contains("path_nodes")) cfg.path_nodes = static_cast<int>(get_integer(j, "path_nodes", "solve"));
    return cfg;
}

std::string csv_header(int order) {
    std::string s;
    for (int k = 1; k <= order; ++k) {
        s += "u_" + std::to_string(k);
        s += ',';
    }
    s += "residual,energy,kind\n";
    return s;
}

struct HypothesisOutcome {
    json doc;
    bool satisfied = false;
    std::optional<OpenInterval> interval; ///< theorem kinds only
    double auto_threshold = std::numeric_limits<double>::quiet_NaN(); ///< corollary kinds only
};

HypothesisOutcome evaluate_hypotheses(const Scenario& s) {
    HypothesisOutcome out;
    const int T = s.matrix.order();
    if (is_theorem_kind(s.kind)) {
        if (!s.gamma || !s.delta)
            throw ValidationError("kind '" + std::string(to_string(s.kind)) + "' needs gamma and delta");
        const HypothesisReport hr = [&] {
            // Route through the closed-form cross-checked paths when the
            // operator family makes one available.
            if (s.tridiag_a && s.tridiag_b)
                return specialize_tridiagonal(T, *s.tridiag_a, *s.tridiag_b, s.nonlinearities, *s.gamma,
                                              *s.delta);
            if (s.matrix_type == "fourth_order")
                return specialize_fourth_order(T, s.nonlinearities, *s.gamma, *s.delta);
            if (s.grid) return specialize_grid(*s.grid, s.nonlinearities, *s.gamma, *s.delta);
            return check_g1(s.matrix, s.nonlinearities, *s.gamma, *s.delta);
        }();
        out.doc["gamma"] = hr.gamma;
        out.doc["delta"] = hr.delta;
        out.doc["delta_lower_bound"] = hr.delta_lower_bound;
        out.doc["g1_lhs"] = hr.g1_lhs;
        out.doc["g1_rhs"] = hr.g1_rhs;
        out.doc["g2_margin"] = finite_or_null(hr.g2_margin);
        out.doc["lambda_interval"] = {{"left", finite_or_null(hr.lambda_interval.left)},
                                      {"right", finite_or_null(hr.lambda_interval.right)}};
        out.doc["satisfied"] = hr.satisfied;
        out.satisfied = hr.satisfied;
        out.interval = hr.lambda_interval;
        return out;
    }

    if (!s.delta)
        throw ValidationError("kind '" + std::string(to_string(s.kind)) + "' needs delta");
    if (!s.shared_nonlinearity)
        throw ValidationError("kind '" + std::string(to_string(s.kind)) +
                              "' needs one shared nonlinearity");
    const WeightVector alpha =
        s.weights ? *s.weights : WeightVector(std::vector<double>(static_cast<size_t>(T), 1.0));
    const CorollaryReport cr = check_h_conditions(s.nonlinearities.front(), alpha, s.matrix, *s.delta);
    out.doc["delta"] = cr.delta;
    out.doc["threshold"] = cr.threshold;
    out.doc["h1_ok"] = cr.h1_ok;
    out.doc["h2_ok"] = cr.h2_ok;
    out.doc["h3_ok"] = cr.h3_ok;
    out.doc["optimized_threshold"] = cr.optimized_threshold;
    out.doc["satisfied"] = cr.satisfied();
    out.satisfied = cr.satisfied();
    out.auto_threshold = s.kind == ScenarioKind::theorem11 ? cr.optimized_threshold : cr.threshold;
    return out;
}

double resolve_lambda(const Scenario& s, const HypothesisOutcome& hyp) {
    if (std::holds_alternative<double>(s.lambda_spec)) return std::get<double>(s.lambda_spec);
    if (hyp.interval) {
        const double left = hyp.interval->left;
        const double right = hyp.interval->right;
        if (!std::isfinite(right)) return 2.0 * left;
        if (right / left <= 100.0) return 0.5 * (left + right);
        return std::sqrt(left * right);
    }
    // Corollary kinds have a half-line (threshold, inf); sit at twice the bound.
    return 2.0 * hyp.auto_threshold;
}

} // namespace

const char* to_string(ScenarioKind k) { return kind_names[static_cast<int>(k)]; }

ScenarioKind scenario_kind_from(const std::string& name) {
    for (int i = 0; i < 6; ++i)
        if (name == kind_names[i]) return static_cast<ScenarioKind>(i);
    throw ValidationError("unknown scenario kind '" + name + "'");
}

Scenario parse_scenario(const json& doc) {
    try {
        expect_keys(doc,
                    {"name", "kind", "matrix_spec", "nonlinearity_spec", "weights", "gamma", "delta",
                     "lambda", "solve"},
                    "scenario");
        if (!doc.contains("name") || !doc.at("name").is_string())
            throw ValidationError("scenario: missing string 'name'");
        if (!doc.contains("kind") || !doc.at("kind").is_string())
            throw ValidationError("scenario: missing string 'kind'");
        if (!doc.contains("matrix_spec")) throw ValidationError("scenario: missing 'matrix_spec'");
        if (!doc.contains("nonlinearity_spec")) throw ValidationError("scenario: missing 'nonlinearity_spec'");
        if (!doc.contains("lambda")) throw ValidationError("scenario: missing 'lambda'");

        ParsedMatrix pm = parse_matrix(doc.at("matrix_spec"));
        const int T = pm.matrix.order();

        std::vector<PiecewiseNonlinearity> gs;
        bool shared = false;
        const json& nl = doc.at("nonlinearity_spec");
        if (nl.is_array()) {
            if (static_cast<int>(nl.size()) != T)
                throw ValidationError("nonlinearity_spec: need one entry per component");
            for (const json& item : nl) gs.push_back(parse_nonlinearity(item));
        } else {
            shared = true;
            const PiecewiseNonlinearity g = parse_nonlinearity(nl);
            gs.assign(static_cast<size_t>(T), g);
        }

        std::optional<WeightVector> weights;
        if (doc.contains("weights")) {
            if (!doc.at("weights").is_array())
                throw ValidationError("scenario: 'weights' must be an array of numbers");
            std::vector<double> w;
            for (const json& x : doc.at("weights")) {
                if (!x.is_number()) throw ValidationError("scenario: weights must be numbers");
                w.push_back(x.get<double>());
            }
            if (static_cast<int>(w.size()) != T)
                throw ValidationError("scenario: need one weight per component");
            weights = WeightVector(std::move(w));
        }

        std::optional<double> gamma;
        std::optional<double> delta;
        if (doc.contains("gamma")) {
            gamma = get_number(doc, "gamma", "scenario");
            if (!(*gamma > 0.0) || !std::isfinite(*gamma))
                throw ValidationError("scenario: gamma must be a positive number");
        }
        if (doc.contains("delta")) {
            delta = get_number(doc, "delta", "scenario");
            if (!(*delta > 0.0) || !std::isfinite(*delta))
                throw ValidationError("scenario: delta must be a positive number");
        }

        std::variant<double, std::string> lambda_spec;
        const json& lj = doc.at("lambda");
        if (lj.is_string()) {
            if (lj.get<std::string>() != "auto_mid")
                throw ValidationError("scenario: lambda must be a positive number or \"auto_mid\"");
            lambda_spec = std::string("auto_mid");
        } else if (lj.is_number()) {
            const double l = lj.get<double>();
            if (!(l > 0.0) || !std::isfinite(l))
                throw ValidationError("scenario: lambda must be positive");
            lambda_spec = l;
        } else {
            throw ValidationError("scenario: lambda must be a positive number or \"auto_mid\"");
        }

        Scenario s{doc.at("name").get<std::string>(),
                   scenario_kind_from(doc.at("kind").get<std::string>()),
                   std::move(pm.type),
                   std::move(pm.matrix),
                   pm.grid,
                   pm.a,
                   pm.b,
                   std::move(gs),
                   shared,
                   std::move(weights),
                   gamma,
                   delta,
                   std::move(lambda_spec),
                   parse_solve(doc)};
        // Kind-specific requirements are enforced here so a bad file fails
        // before any computation starts.
        if (is_theorem_kind(s.kind)) {
            if (!s.gamma || !s.delta)
                throw ValidationError("kind '" + std::string(to_string(s.kind)) +
                                      "' needs gamma and delta");
        } else {
            if (!s.delta)
                throw ValidationError("kind '" + std::string(to_string(s.kind)) + "' needs delta");
            if (!s.shared_nonlinearity)
                throw ValidationError("kind '" + std::string(to_string(s.kind)) +
                                      "' needs one shared nonlinearity");
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ValidationError(std::string("scenario: ") + e.what());
    }
}

Scenario load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot read scenario file: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("scenario file ") + path + ": " + e.what());
    }
    return parse_scenario(doc);
}

RunResult run_scenario(const Scenario& s) {
    json rep;
    rep["name"] = s.name;
    rep["kind"] = to_string(s.kind);

    const Spectrum sp = spectrum(s.matrix);
    json m;
    m["type"] = s.matrix_type;
    m["order"] = s.matrix.order();
    m["lambda_min"] = sp.lambda_min;
    m["lambda_max"] = sp.lambda_max;
    m["ones_quadratic"] = ones_quadratic(s.matrix);
    if (s.grid) {
        m["m"] = s.grid->m;
        m["n"] = s.grid->n;
    }
    rep["matrix"] = m;

    std::vector<std::string> warnings;
    const HypothesisOutcome hyp = evaluate_hypotheses(s);
    rep["hypothesis"] = hyp.doc;

    if (!hyp.satisfied) {
        if (std::holds_alternative<double>(s.lambda_spec))
            rep["lambda"] = std::get<double>(s.lambda_spec);
        else
            rep["lambda"] = json(); // auto_mid is unresolvable without the hypotheses
        rep["solutions"] = json::array();
        rep["claims_met"] = false;
        warnings.push_back("hypotheses not satisfied; no solve attempted");
        rep["warnings"] = warnings;
        return RunResult{2, std::move(rep), csv_header(s.matrix.order())};
    }

    const double lambda = resolve_lambda(s, hyp);
    if (hyp.interval && !hyp.interval->contains(lambda))
        warnings.push_back("lambda " + fmt17(lambda) + " lies outside the admissible interval ]" +
                           fmt17(hyp.interval->left) + ", " + fmt17(hyp.interval->right) + "[");
    if (!hyp.interval && !(lambda > hyp.auto_threshold))
        warnings.push_back("lambda " + fmt17(lambda) + " is not above the threshold " +
                           fmt17(hyp.auto_threshold));

    const InclusionProblem p(s.matrix, s.nonlinearities, lambda, s.weights);
    const MultiplicityClaim claim = is_theorem_kind(s.kind) ? MultiplicityClaim::three_solutions
                                                            : MultiplicityClaim::two_nontrivial;
    const MultiplicityReport mr = find_multiplicity(p, s.solve, claim, s.delta);

    rep["lambda"] = lambda;
    json sols = json::array();
    std::string csv = csv_header(s.matrix.order());
    for (size_t i = 0; i < mr.solutions.size(); ++i) {
        const CertifiedSolution& c = mr.solutions[i];
        json row;
        row["u"] = c.u;
        row["residual"] = c.residual;
        row["energy"] = c.energy;
        row["kind"] = to_string(c.kind);
        row["origin"] = mr.origins[i];
        sols.push_back(std::move(row));
        for (double x : c.u) {
            csv += fmt17(x);
            csv += ',';
        }
        csv += fmt17(c.residual);
        csv += ',';
        csv += fmt17(c.energy);
        csv += ',';
        csv += to_string(c.kind);
        csv += '\n';
    }
    rep["solutions"] = std::move(sols);
    rep["claims_met"] = mr.claims_met;
    rep["warnings"] = warnings;

    return RunResult{mr.claims_met ? 0 : 3, std::move(rep), std::move(csv)};
}

nlohmann::json check_hypotheses(const Scenario& s, bool& satisfied) {
    HypothesisOutcome out = evaluate_hypotheses(s);
    satisfied = out.satisfied;
    return std::move(out.doc);
}

RunResult run_and_write(const Scenario& s, const std::string& out_dir) {
    RunResult r = run_scenario(s);
    std::filesystem::create_directories(out_dir);
    {
        std::ofstream out(out_dir + "/report.json", std::ios::binary);
        if (!out) throw InternalError("cannot write report.json in " + out_dir);
        out << r.report.dump(2) << '\n';
    }
    {
        std::ofstream out(out_dir + "/solutions.csv", std::ios::binary);
        if (!out) throw InternalError("cannot write solutions.csv in " + out_dir);
        out << r.solutions_csv;
    }
    return r;
}

RunResult run_scenario_file(const std::string& path, const std::string& out_dir) {
    return run_and_write(load_scenario_file(path), out_dir);
}

} // namespace diffinc
