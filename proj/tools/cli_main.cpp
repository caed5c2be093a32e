#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "diffinc/errors.hpp"
#include "diffinc/matrix.hpp"
#include "diffinc/scenario.hpp"
#include "diffinc/solve.hpp"
#include "diffinc/variational.hpp"

namespace {

diffinc::SpdMatrix matrix_from_args(const std::string& type, const std::vector<double>& params) {
    const auto need = [&](size_t n, const char* what) {
        if (params.size() != n)
            throw diffinc::ValidationError(type + " takes " + what);
    };
    if (type == "tridiagonal") {
        need(3, "parameters: size a b");
        return diffinc::build_tridiagonal(static_cast<int>(params[0]), params[1], params[2]);
    }
    if (type == "second_order") {
        need(1, "one parameter: size");
        return diffinc::build_second_order(static_cast<int>(params[0]));
    }
    if (type == "fourth_order") {
        need(1, "one parameter: size");
        return diffinc::build_fourth_order(static_cast<int>(params[0]));
    }
    if (type == "grid") {
        need(2, "parameters: m n");
        return diffinc::build_grid_laplacian(
            diffinc::GridShape{static_cast<int>(params[0]), static_cast<int>(params[1])});
    }
    throw diffinc::ValidationError("unknown matrix type '" + type +
                                   "' (expected tridiagonal, second_order, fourth_order, or grid)");
}

void apply_overrides(diffinc::Scenario& s, const std::optional<uint64_t>& seed,
                     const std::optional<double>& tol) {
    if (seed) s.solve.seed = *seed;
    if (tol) s.solve.tol_residual = *tol;
}

int run_build_matrix(const std::string& type, const std::vector<double>& params) {
    const diffinc::SpdMatrix a = matrix_from_args(type, params);
    for (int k = 0; k < a.order(); ++k) {
        for (int l = 0; l < a.order(); ++l) std::printf(l ? " %.12g" : "%.12g", a(k, l));
        std::printf("\n");
    }
    return 0;
}

int run_spectrum(const std::string& type, const std::vector<double>& params) {
    const diffinc::Spectrum sp = diffinc::spectrum(matrix_from_args(type, params));
    for (double ev : sp.eigenvalues) std::printf("%.17g\n", ev);
    return 0;
}

int run_check(const std::string& path) {
    const diffinc::Scenario s = diffinc::load_scenario_file(path);
    bool satisfied = false;
    const nlohmann::json doc = diffinc::check_hypotheses(s, satisfied);
    std::printf("%s\n", doc.dump(2).c_str());
    return satisfied ? 0 : 2;
}

int run_interval(const std::string& path) {
    const diffinc::Scenario s = diffinc::load_scenario_file(path);
    bool satisfied = false;
    const nlohmann::json doc = diffinc::check_hypotheses(s, satisfied);
    const auto show = [](const nlohmann::json& v) -> std::string {
        if (v.is_null()) return "inf";
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.12g", v.get<double>());
        return buf;
    };
    if (doc.contains("lambda_interval")) {
        std::printf("left %s\n", show(doc.at("lambda_interval").at("left")).c_str());
        std::printf("right %s\n", show(doc.at("lambda_interval").at("right")).c_str());
    } else {
        std::printf("left %s\n", show(doc.at("threshold")).c_str());
        std::printf("right inf\n");
    }
    if (!satisfied) {
        std::printf("hypotheses not satisfied\n");
        return 2;
    }
    return 0;
}

int run_solve(const std::string& path, const std::string& out_dir, const std::optional<uint64_t>& seed,
              const std::optional<double>& tol) {
    diffinc::Scenario s = diffinc::load_scenario_file(path);
    apply_overrides(s, seed, tol);
    const diffinc::RunResult r = diffinc::run_and_write(s, out_dir);
    std::printf("scenario %s: exit %d, %zu solution(s), claims_met %s\n", s.name.c_str(), r.exit_code,
                r.report.at("solutions").size(), r.report.at("claims_met").get<bool>() ? "true" : "false");
    std::printf("wrote %s/report.json and %s/solutions.csv\n", out_dir.c_str(), out_dir.c_str());
    return r.exit_code;
}

int run_oracle(const std::string& path, double radius, int points, const std::optional<uint64_t>& seed,
               const std::optional<double>& tol) {
    diffinc::Scenario s = diffinc::load_scenario_file(path);
    apply_overrides(s, seed, tol);
    if (!std::holds_alternative<double>(s.lambda_spec))
        throw diffinc::ValidationError("oracle needs a numeric lambda in the scenario");
    const diffinc::InclusionProblem p(s.matrix, s.nonlinearities, std::get<double>(s.lambda_spec),
                                      s.weights);
    const std::vector<diffinc::CertifiedSolution> sols =
        diffinc::brute_force_oracle(p, radius, points, s.solve);
    for (const diffinc::CertifiedSolution& c : sols) {
        for (double x : c.u) std::printf("%.17g ", x);
        std::printf("residual %.3g energy %.17g %s\n", c.residual, c.energy, diffinc::to_string(c.kind));
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Discrete inclusion toolkit: operators, hypothesis checks, admissible intervals, solvers"};
    app.require_subcommand(1);

    std::string type;
    std::vector<double> params;
    std::string scenario_path;
    std::string out_dir = ".";
    std::optional<uint64_t> seed;
    std::optional<double> tol;
    double radius = 2.0;
    int points = 401;

    CLI::App* bm = app.add_subcommand("build-matrix", "Construct an operator and print its rows");
    bm->add_option("type", type, "tridiagonal | second_order | fourth_order | grid")->required();
    bm->add_option("params", params, "size arguments (e.g. T a b, or m n)");

    CLI::App* sp = app.add_subcommand("spectrum", "Print the eigenvalues of an operator, ascending");
    sp->add_option("type", type, "tridiagonal | second_order | fourth_order | grid")->required();
    sp->add_option("params", params, "size arguments");

    CLI::App* ck = app.add_subcommand("check", "Evaluate a scenario's hypotheses and print the report");
    ck->add_option("--scenario", scenario_path, "scenario file")->required();

    CLI::App* iv = app.add_subcommand("interval", "Print the admissible parameter range of a scenario");
    iv->add_option("--scenario", scenario_path, "scenario file")->required();

    CLI::App* sv = app.add_subcommand("solve", "Run a scenario end to end and write report files");
    sv->add_option("--scenario", scenario_path, "scenario file")->required();
    sv->add_option("--out", out_dir, "output directory (default: current)");
    sv->add_option("--seed", seed, "override the solver seed");
    sv->add_option("--tol", tol, "override the residual tolerance");

    CLI::App* orc = app.add_subcommand("oracle", "Exhaustive small-order scan (order <= 3)");
    orc->add_option("--scenario", scenario_path, "scenario file with a numeric lambda")->required();
    orc->add_option("--radius", radius, "scan half-width (default 2)");
    orc->add_option("--points", points, "lattice points per axis (default 401)");
    orc->add_option("--seed", seed, "override the solver seed");
    orc->add_option("--tol", tol, "override the residual tolerance");

    CLI11_PARSE(app, argc, argv);

    try {
        if (bm->parsed()) return run_build_matrix(type, params);
        if (sp->parsed()) return run_spectrum(type, params);
        if (ck->parsed()) return run_check(scenario_path);
        if (iv->parsed()) return run_interval(scenario_path);
        if (sv->parsed()) return run_solve(scenario_path, out_dir, seed, tol);
        if (orc->parsed()) return run_oracle(scenario_path, radius, points, seed, tol);
    } catch (const diffinc::ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 64;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 65;
    }
    return 0;
}
