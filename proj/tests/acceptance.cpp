// Acceptance gate: ten independently scripted checks, one line of output
// each. Every tolerance is written out literally at its point of use so the
// gate cannot drift apart from the documented contract.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "diffinc/errors.hpp"
#include "diffinc/hypotheses.hpp"
#include "diffinc/matrix.hpp"
#include "diffinc/piecewise.hpp"
#include "diffinc/scenario.hpp"
#include "diffinc/solve.hpp"
#include "diffinc/variational.hpp"

#include "support.hpp"

using namespace diffinc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

std::vector<PiecewiseNonlinearity> shared_bump(int n) {
    return std::vector<PiecewiseNonlinearity>(static_cast<size_t>(n),
                                              testsupport::truncated_quadratic());
}

double dist_inf(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

bool sets_match(const std::vector<CertifiedSolution>& a, const std::vector<CertifiedSolution>& b,
                double tol) {
    if (a.size() != b.size()) return false;
    auto covered = [&](const std::vector<CertifiedSolution>& xs, const CertifiedSolution& s) {
        for (const auto& x : xs)
            if (dist_inf(x.u, s.u) <= tol) return true;
        return false;
    };
    for (const auto& s : a)
        if (!covered(b, s)) return false;
    for (const auto& s : b)
        if (!covered(a, s)) return false;
    return true;
}

// 1. Iterative eigenvalues against the closed trigonometric form.
Outcome criterion_spectrum() {
    Outcome out;
    const double pairs[3][2] = {{-1.0, 2.0}, {-1.0, 3.0}, {-0.5, 2.0}};
    for (const auto& ab : pairs) {
        const double a = ab[0], b = ab[1];
        for (int T = 2; T <= 50; ++T) {
            const Spectrum sp = spectrum(build_tridiagonal(T, a, b));
            for (int k = 1; k <= T; ++k) {
                const double closed = tridiagonal_eigenvalue(k, T, a, b);
                const double got = sp.eigenvalues[static_cast<size_t>(k - 1)];
                if (std::abs(got - closed) > 1e-9) {
                    out.fail("T=" + std::to_string(T) + " k=" + std::to_string(k) +
                             " mismatch " + std::to_string(std::abs(got - closed)));
                    return out;
                }
            }
        }
    }
    return out;
}

// 2. Exact aggregate identities of the all-ones quadratic form.
Outcome criterion_aggregates() {
    Outcome out;
    const double pairs[3][2] = {{-1.0, 2.0}, {-1.0, 3.0}, {-0.5, 2.0}};
    for (const auto& ab : pairs)
        for (int T = 2; T <= 30; ++T)
            if (ones_quadratic(build_tridiagonal(T, ab[0], ab[1])) !=
                ab[1] * T + 2.0 * ab[0] * (T - 1))
                out.fail("tridiagonal T=" + std::to_string(T));
    for (int T = 2; T <= 30; ++T)
        if (ones_quadratic(build_fourth_order(T)) != 4.0) out.fail("fourth T=" + std::to_string(T));
    for (int m = 1; m <= 10; ++m)
        for (int n = 1; n <= 10; ++n)
            if (ones_quadratic(build_grid_laplacian(GridShape{m, n})) != 2.0 * (m + n))
                out.fail("grid " + std::to_string(m) + "x" + std::to_string(n));
    return out;
}

// 3. Spectral sandwich and max-norm embedding on random vectors.
Outcome criterion_sandwich() {
    Outcome out;
    std::vector<SpdMatrix> mats;
    mats.push_back(build_tridiagonal(6, -1.0, 2.0));
    mats.push_back(build_tridiagonal(6, -1.0, 3.0));
    mats.push_back(build_tridiagonal(6, -0.5, 2.0));
    mats.push_back(build_second_order(1));
    mats.push_back(build_fourth_order(5));
    mats.push_back(build_fourth_order(9));
    mats.push_back(build_grid_laplacian(GridShape{2, 2}));
    mats.push_back(build_grid_laplacian(GridShape{3, 2}));
    mats.push_back(build_grid_laplacian(GridShape{4, 5}));
    mats.push_back(SpdMatrix(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));

    std::mt19937_64 rng(301);
    for (const SpdMatrix& a : mats) {
        const Spectrum sp = spectrum(a);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::vector<double> u =
                testsupport::random_vector(rng, static_cast<size_t>(a.order()), -1.0, 1.0);
            double n2 = 0.0, ninf = 0.0;
            for (double x : u) {
                n2 += x * x;
                ninf = std::max(ninf, std::abs(x));
            }
            const double q = quadratic_form(a, u);
            if (sp.lambda_min * n2 > q * (1.0 + 1e-9) + 1e-300)
                out.fail("lower sandwich violated");
            if (q > sp.lambda_max * n2 * (1.0 + 1e-9) + 1e-300)
                out.fail("upper sandwich violated");
            if (ninf > std::sqrt(q / sp.lambda_min) * (1.0 + 1e-9) + 1e-300)
                out.fail("max-norm embedding violated");
        }
    }
    return out;
}

// 4. One-sided limits at the kinks and the window supremum of the potential.
Outcome criterion_envelopes() {
    Outcome out;
    const PiecewiseNonlinearity h = testsupport::truncated_quadratic();
    const PiecewiseNonlinearity step = testsupport::two_step();

    if (h.envelope_minus(1.0) != 0.0 || h.envelope_plus(1.0) != 1.0) out.fail("bump at +1");
    if (h.envelope_minus(-1.0) != 0.0 || h.envelope_plus(-1.0) != 1.0) out.fail("bump at -1");
    if (h.envelope_minus(0.5) != 0.25 || h.envelope_plus(0.5) != 0.25) out.fail("bump interior");
    if (step.envelope_minus(0.0) != 0.0 || step.envelope_plus(0.0) != 1.0) out.fail("step at 0");
    if (step.envelope_minus(1.0) != 1.0 || step.envelope_plus(1.0) != 3.0) out.fail("step at 1");

    for (const PiecewiseNonlinearity* g : {&h, &step}) {
        for (double gamma : {0.5, 1.0, 2.0}) {
            double scan = -1e300;
            const int n = 1000000;
            for (int i = 0; i <= n; ++i) {
                const double t = -gamma + 2.0 * gamma * static_cast<double>(i) / n;
                scan = std::max(scan, g->potential(t));
            }
            if (std::abs(g->sup_potential(gamma) - scan) > 1e-9)
                out.fail("sup vs scan at gamma=" + std::to_string(gamma));
        }
    }
    return out;
}

// 5. The scalar problem has exactly its three known points.
Outcome criterion_scalar_multiplicity() {
    Outcome out;
    const InclusionProblem p(build_second_order(1), shared_bump(1), 4.0);
    SolveConfig cfg;
    cfg.tol_residual = 1e-12;
    const MultiplicityReport r = find_multiplicity(p, cfg, MultiplicityClaim::three_solutions, 1.0);
    if (!r.claims_met || r.solutions.size() != 3) out.fail("census size");
    const std::vector<std::vector<double>> expected = {{0.0}, {0.5}, {1.0}};
    for (const auto& e : expected) {
        bool found = false;
        for (const auto& s : r.solutions)
            if (dist_inf(s.u, e) <= cfg.tol_distinct) found = s.residual <= 1e-10;
        if (!found) out.fail("missing or imprecise point");
    }
    const auto oracle = brute_force_oracle(p, 2.0, 2001, cfg);
    if (!sets_match(r.solutions, oracle, cfg.tol_distinct)) out.fail("oracle disagrees");
    return out;
}

// 6. The five-point chain: pinned threshold, certified pair, order-two cross-check.
Outcome criterion_chain() {
    Outcome out;
    const SpdMatrix a5 = build_second_order(5);
    const WeightVector ones5(std::vector<double>(5, 1.0));
    const CorollaryReport cr =
        check_h_conditions(testsupport::truncated_quadratic(), ones5, a5, 1.0);
    if (std::abs(cr.threshold - 0.6) > 1e-14) out.fail("threshold not 0.6");

    SolveConfig cfg;
    const InclusionProblem p5(a5, shared_bump(5), 2.0);
    const MultiplicityReport r5 = find_multiplicity(p5, cfg, MultiplicityClaim::two_nontrivial, 1.0);
    int nontrivial = 0;
    for (const auto& s : r5.solutions) {
        if (s.residual > 1e-8) out.fail("residual above 1e-8");
        if (s.kind != SolutionKind::trivial && dist_inf(s.u, std::vector<double>(5, 0.0)) > cfg.tol_distinct)
            ++nontrivial;
    }
    if (nontrivial < 2 || !r5.claims_met) out.fail("fewer than two nontrivial points");

    const InclusionProblem p2(build_second_order(2), shared_bump(2), 2.0);
    const MultiplicityReport r2 = find_multiplicity(p2, cfg, MultiplicityClaim::three_solutions, 1.0);
    const auto oracle2 = brute_force_oracle(p2, 2.0, 401, cfg);
    if (!sets_match(r2.solutions, oracle2, cfg.tol_distinct)) out.fail("order-two oracle disagrees");
    return out;
}

// 7. Interval nonemptiness tracks the hypothesis, and scales inversely with g.
Outcome criterion_interval() {
    Outcome out;
    const SpdMatrix a5 = build_second_order(5);
    const auto gs = shared_bump(5);
    std::mt19937_64 rng(701);
    for (int i = 0; i < 200; ++i) {
        const double gamma = testsupport::uniform_in(rng, 1e-3, 2.5);
        const double delta = testsupport::uniform_in(rng, 0.05, 3.0);
        const HypothesisReport hr = check_g1(a5, gs, gamma, delta);
        if (hr.satisfied != hr.lambda_interval.nonempty()) {
            out.fail("emptiness mismatch at gamma=" + std::to_string(gamma) +
                     " delta=" + std::to_string(delta));
            return out;
        }
    }
    const OpenInterval base = lambda_interval(a5, gs, 0.01, 1.0);
    for (double c : {0.5, 2.0, 10.0}) {
        std::vector<PiecewiseNonlinearity> scaled(
            5, PiecewiseNonlinearity({-1.0, 1.0},
                                     {Polynomial{{}}, Polynomial{{0.0, 0.0, c}}, Polynomial{{}}},
                                     DeclaredBound{0.0, 1.0}, DeclaredBound{0.0, 1.0}));
        const OpenInterval iv = lambda_interval(a5, scaled, 0.01, 1.0);
        if (std::abs(iv.left - base.left / c) > 1e-12 * std::abs(base.left / c) ||
            std::abs(iv.right - base.right / c) > 1e-12 * std::abs(base.right / c))
            out.fail("scaling violated at c=" + std::to_string(c));
    }
    return out;
}

// 8. Energy grows along every ray once the parameter sits mid-interval.
Outcome criterion_coercivity() {
    Outcome out;
    const SpdMatrix a5 = build_second_order(5);
    const auto gs = shared_bump(5);
    const OpenInterval iv = lambda_interval(a5, gs, 0.01, 1.0);
    const double lambda = 0.5 * (iv.left + iv.right);
    const InclusionProblem p(a5, gs, lambda);
    std::mt19937_64 rng(801);
    for (int d = 0; d < 64; ++d) {
        const std::vector<double> e = testsupport::random_direction(rng, 5);
        double prev = -1e300;
        for (double r : {10.0, 100.0, 1000.0, 10000.0}) {
            std::vector<double> u(5);
            for (size_t i = 0; i < 5; ++i) u[i] = r * e[i];
            const double val = j_lambda(p, u);
            if (!(val > prev)) out.fail("ray energy not increasing");
            prev = val;
        }
    }
    return out;
}

// 9. Every shipped scenario reruns to the identical byte stream.
Outcome criterion_determinism() {
    Outcome out;
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(DIFFINC_SCENARIO_DIR))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        out.fail("no scenario files found");
        return out;
    }
    for (const auto& f : files) {
        const Scenario s = load_scenario_file(f.string());
        const RunResult r1 = run_scenario(s);
        const RunResult r2 = run_scenario(s);
        if (r1.solutions_csv != r2.solutions_csv || r1.report.dump(2) != r2.report.dump(2)) {
            out.fail("nondeterministic rerun: " + f.filename().string());
            return out;
        }
        if (r1.exit_code != 0) {
            out.fail(f.filename().string() + " exited " + std::to_string(r1.exit_code));
            return out;
        }
    }
    return out;
}

// 10. The descent direction matches a central finite difference of the energy.
Outcome criterion_gradient() {
    Outcome out;
    std::vector<InclusionProblem> problems;
    problems.emplace_back(build_second_order(1), shared_bump(1), 4.0);
    problems.emplace_back(build_second_order(4), shared_bump(4), 2.0);
    problems.emplace_back(build_tridiagonal(6, -1.0, 3.0), shared_bump(6), 2.0);
    problems.emplace_back(build_fourth_order(5), shared_bump(5), 1.5);
    problems.emplace_back(build_grid_laplacian(GridShape{2, 2}), shared_bump(4), 3.0);

    std::mt19937_64 rng(1001);
    const double h = 1e-6;
    for (const InclusionProblem& p : problems) {
        const size_t T = static_cast<size_t>(p.matrix().order());
        for (int pt = 0; pt < 100; ++pt) {
            std::vector<double> u(T);
            for (auto& x : u) {
                do {
                    x = testsupport::uniform_in(rng, -2.0, 2.0);
                } while (std::abs(std::abs(x) - 1.0) < 1e-3);
            }
            const std::vector<double> d = descent_direction(p, u);
            for (size_t k = 0; k < T; ++k) {
                std::vector<double> up = u, dn = u;
                up[k] += h;
                dn[k] -= h;
                const double fd = (j_lambda(p, up) - j_lambda(p, dn)) / (2.0 * h);
                if (std::abs(d[k] - fd) > 1e-5 * std::max(1.0, std::abs(fd))) {
                    out.fail("gradient mismatch");
                    return out;
                }
            }
        }
    }
    return out;
}

struct Criterion {
    int id;
    const char* label;
    double budget_ms;
    std::function<Outcome()> run;
};

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "closed-form spectra reproduced to 1e-9", 5000.0, criterion_spectrum},
        {2, "all-ones quadratic form identities exact", 1000.0, criterion_aggregates},
        {3, "spectral sandwich and embedding inequalities", 2000.0, criterion_sandwich},
        {4, "envelopes and window suprema against a dense scan", 3000.0, criterion_envelopes},
        {5, "scalar census is exactly its three points", 1000.0, criterion_scalar_multiplicity},
        {6, "five-point chain threshold and certified pair", 30000.0, criterion_chain},
        {7, "interval nonemptiness and inverse scaling", 5000.0, criterion_interval},
        {8, "energy coercive along rays at the midpoint parameter", 2000.0, criterion_coercivity},
        {9, "scenario reruns byte-identical and clean", 0.0, criterion_determinism},
        {10, "descent direction matches central differences", 2000.0, criterion_gradient},
    };

    int passed = 0;
    for (const Criterion& c : criteria) {
        Outcome out;
        const auto t0 = Clock::now();
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out.fail(std::string("exception: ") + e.what());
        }
        const double elapsed = ms_since(t0);
        if (out.pass && c.budget_ms > 0.0 && elapsed > c.budget_ms)
            out.fail("over time budget: " + std::to_string(elapsed) + " ms");
        if (out.pass) {
            ++passed;
            std::printf("[PASS] criterion %2d: %s (%.0f ms)\n", c.id, c.label, elapsed);
        } else {
            std::printf("[FAIL] criterion %2d: %s — %s (%.0f ms)\n", c.id, c.label,
                        out.detail.c_str(), elapsed);
        }
    }
    std::printf("acceptance: %d/10 criteria passed\n", passed);
    return passed == 10 ? 0 : 1;
}
