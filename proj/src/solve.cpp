#include "diffinc/solve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "diffinc/errors.hpp"

namespace diffinc {

namespace {

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dist_inf(std::span<const double> a, std::span<const double> b) {
    double m = 0.0;
    for (size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
    return m;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

bool all_zero(std::span<const double> v) {
    for (double x : v)
        if (x != 0.0) return false;
    return true;
}

double uniform_unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

void validate_config(const SolveConfig& cfg) {
    if (!(cfg.tol_residual > 0.0)) throw ValidationError("tol_residual must be positive");
    if (!(cfg.tol_distinct > 0.0)) throw ValidationError("tol_distinct must be positive");
    if (cfg.starts < 1) throw ValidationError("need at least one start");
    if (cfg.max_iters < 1) throw ValidationError("need at least one iteration");
    if (!(cfg.step_init > 0.0)) throw ValidationError("step_init must be positive");
    if (cfg.path_nodes < 3 || cfg.path_nodes % 2 == 0)
        throw ValidationError("path_nodes must be odd and at least three");
}

// Candidate with each component within radius of a breakpoint of its own
// nonlinearity moved exactly onto the nearest one. Empty when nothing moved.
std::optional<std::vector<double>> snapped(const InclusionProblem& p, std::span<const double> u,
                                           double radius) {
    std::vector<double> v(u.begin(), u.end());
    bool changed = false;
    for (size_t k = 0; k < u.size(); ++k) {
        double best = radius;
        double target = u[k];
        for (double b : p.nonlinearity(k).breakpoints()) {
            const double d = std::abs(u[k] - b);
            if (d > 0.0 && d <= best) {
                best = d;
                target = b;
            }
        }
        if (target != u[k]) {
            v[k] = target;
            changed = true;
        }
    }
    if (!changed) return std::nullopt;
    return v;
}

// Dense LU with partial pivoting; returns false on a vanishing pivot.
bool lu_solve(std::vector<double> m, std::vector<double> rhs, int n, std::vector<double>& out) {
    std::vector<int> perm(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) perm[static_cast<size_t>(i)] = i;
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::abs(m[static_cast<size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double v = std::abs(m[static_cast<size_t>(r) * n + col]);
            if (v > best) {
                best = v;
                piv = r;
            }
        }
        if (best < 1e-300) return false;
        if (piv != col) {
            for (int c = 0; c < n; ++c)
                std::swap(m[static_cast<size_t>(piv) * n + c], m[static_cast<size_t>(col) * n + c]);
            std::swap(rhs[static_cast<size_t>(piv)], rhs[static_cast<size_t>(col)]);
        }
        const double d = m[static_cast<size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = m[static_cast<size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                m[static_cast<size_t>(r) * n + c] -= f * m[static_cast<size_t>(col) * n + c];
            rhs[static_cast<size_t>(r)] -= f * rhs[static_cast<size_t>(col)];
        }
    }
    out.assign(static_cast<size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = rhs[static_cast<size_t>(r)];
        for (int c = r + 1; c < n; ++c) s -= m[static_cast<size_t>(r) * n + c] * out[static_cast<size_t>(c)];
        out[static_cast<size_t>(r)] = s / m[static_cast<size_t>(r) * n + r];
    }
    return true;
}

bool at_breakpoint(const PiecewiseNonlinearity& g, double t) {
    const auto& bp = g.breakpoints();
    return std::binary_search(bp.begin(), bp.end(), t);
}

// One semismooth Newton pass on the residual field. Components whose equation
// already holds with slack, or which sit exactly on a breakpoint, are frozen;
// the rest use the segment slope. Steps are accepted only when the residual drops.
void newton_polish(const InclusionProblem& p, std::vector<double>& u, double& best, double target) {
    const int n = p.order();
    for (int iter = 0; iter < 60 && best > target; ++iter) {
        const std::vector<double> f = descent_direction(p, u);
        std::vector<double> m(static_cast<size_t>(n) * n, 0.0);
        std::vector<double> rhs(static_cast<size_t>(n), 0.0);
        for (int k = 0; k < n; ++k) {
            const bool frozen = f[static_cast<size_t>(k)] == 0.0 ||
                                at_breakpoint(p.nonlinearity(static_cast<size_t>(k)), u[static_cast<size_t>(k)]);
            if (frozen) {
                m[static_cast<size_t>(k) * n + k] = 1.0;
                continue;
            }
            for (int l = 0; l < n; ++l) m[static_cast<size_t>(k) * n + l] = p.matrix()(k, l);
            m[static_cast<size_t>(k) * n + k] -=
                p.lambda() * p.weight(static_cast<size_t>(k)) *
                p.nonlinearity(static_cast<size_t>(k)).slope(u[static_cast<size_t>(k)]);
            rhs[static_cast<size_t>(k)] = -f[static_cast<size_t>(k)];
        }
        std::vector<double> du;
        if (!lu_solve(std::move(m), std::move(rhs), n, du)) return;
        bool accepted = false;
        double t = 1.0;
        for (int half = 0; half < 25; ++half, t *= 0.5) {
            std::vector<double> v(u.size());
            for (size_t k = 0; k < u.size(); ++k) v[k] = u[k] + t * du[k];
            const double r = residual(p, v);
            if (r < best) {
                u = std::move(v);
                best = r;
                accepted = true;
                break;
            }
        }
        if (!accepted) return;
    }
}

// Derivative-free residual minimization: coordinate moves with a shrinking
// step plus breakpoint snaps. Robust near kinks where Newton has no slope.
void pattern_polish(const InclusionProblem& p, std::vector<double>& u, double& best, double target,
                    double h0) {
    double h = h0;
    while (h >= 1e-13 && best > target) {
        bool improved = false;
        for (size_t k = 0; k < u.size(); ++k) {
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> v = u;
                v[k] += sgn * h;
                const double r = residual(p, v);
                if (r < best) {
                    u = std::move(v);
                    best = r;
                    improved = true;
                }
            }
        }
        if (auto v = snapped(p, u, h)) {
            const double r = residual(p, *v);
            if (r < best) {
                u = std::move(*v);
                best = r;
                improved = true;
            }
        }
        if (!improved) h *= 0.5;
    }
}

// Drive the point toward a nearby residual zero without regard to energy.
// Used to polish saddle candidates and oracle lattice hits.
std::vector<double> refine_to_solution(const InclusionProblem& p, std::vector<double> u, double target) {
    double best = residual(p, u);
    for (double r : {1e-9, 1e-6, 1e-3}) {
        if (best <= target) break;
        if (auto v = snapped(p, u, r)) {
            const double rv = residual(p, *v);
            if (rv < best) {
                u = std::move(*v);
                best = rv;
            }
        }
    }
    const double h0 = 1e-2 * (1.0 + max_abs(u));
    newton_polish(p, u, best, target);
    if (best > target) pattern_polish(p, u, best, target, h0);
    if (best > target) newton_polish(p, u, best, target);
    if (best > target) pattern_polish(p, u, best, target, 1e-6 * (1.0 + max_abs(u)));
    return u;
}

struct Found {
    CertifiedSolution sol;
    std::string origin;
};

bool lex_less(std::span<const double> a, std::span<const double> b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Sort by energy and merge points closer than tol_distinct, keeping the
// smallest-residual member of each cluster as its representative.
void cluster(std::vector<Found>& found, double tol_distinct) {
    std::sort(found.begin(), found.end(), [](const Found& x, const Found& y) {
        if (x.sol.energy != y.sol.energy) return x.sol.energy < y.sol.energy;
        return lex_less(x.sol.u, y.sol.u);
    });
    std::vector<Found> kept;
    for (Found& f : found) {
        bool merged = false;
        for (Found& rep : kept) {
            if (dist_inf(f.sol.u, rep.sol.u) < tol_distinct) {
                if (f.sol.residual < rep.sol.residual ||
                    (f.sol.kind == SolutionKind::trivial && rep.sol.kind != SolutionKind::trivial))
                    rep = std::move(f);
                merged = true;
                break;
            }
        }
        if (!merged) kept.push_back(std::move(f));
    }
    std::sort(kept.begin(), kept.end(), [](const Found& x, const Found& y) {
        if (x.sol.energy != y.sol.energy) return x.sol.energy < y.sol.energy;
        return lex_less(x.sol.u, y.sol.u);
    });
    found = std::move(kept);
}

MultiplicityReport to_report(const InclusionProblem& p, std::vector<Found> found) {
    MultiplicityReport rep;
    rep.lambda = p.lambda();
    rep.claims_met = false;
    for (Found& f : found) {
        rep.solutions.push_back(std::move(f.sol));
        rep.origins.push_back(std::move(f.origin));
    }
    return rep;
}

} // namespace

const char* to_string(SolutionKind k) {
    switch (k) {
        case SolutionKind::trivial: return "trivial";
        case SolutionKind::local_min: return "local_min";
        case SolutionKind::saddle_candidate: return "saddle_candidate";
        case SolutionKind::unclassified: return "unclassified";
    }
    return "unclassified";
}

CertifiedSolution certify(const InclusionProblem& p, std::vector<double> u,
                          std::optional<SolutionKind> kind_hint) {
    const double res = residual(p, u);
    const double energy = j_lambda(p, u);
    SolutionKind kind;
    if (kind_hint) {
        kind = *kind_hint;
    } else if (all_zero(u)) {
        kind = SolutionKind::trivial;
    } else {
        kind = SolutionKind::local_min;
        for (size_t k = 0; k < u.size() && kind == SolutionKind::local_min; ++k) {
            for (double sgn : {1.0, -1.0}) {
                std::vector<double> v = u;
                v[k] += sgn * 1e-4;
                if (j_lambda(p, v) < energy) {
                    kind = SolutionKind::unclassified;
                    break;
                }
            }
        }
    }
    return CertifiedSolution{std::move(u), res, energy, kind};
}

CertifiedSolution minimize_from(const InclusionProblem& p, std::span<const double> start,
                                const SolveConfig& cfg,
                                const std::function<void(std::span<const double>, double)>& observer) {
    validate_config(cfg);
    if (start.size() != static_cast<size_t>(p.order()))
        throw DimensionMismatch("start length does not match order");

    std::vector<double> u(start.begin(), start.end());
    double fu = j_lambda(p, u);
    if (!std::isfinite(fu)) throw ValidationError("start has non-finite energy");

    for (long it = 0; it < cfg.max_iters; ++it) {
        const std::vector<double> d = descent_direction(p, u);
        if (max_abs(d) <= cfg.tol_residual) return certify(p, std::move(u));

        if (auto v = snapped(p, u, 1e-6)) {
            if (residual(p, *v) <= cfg.tol_residual) return certify(p, std::move(*v));
        }

        bool accepted = false;
        for (double eta = cfg.step_init; eta >= 1e-14; eta *= 0.5) {
            std::vector<double> v(u.size());
            for (size_t k = 0; k < u.size(); ++k) v[k] = u[k] - eta * d[k];
            const double fv = j_lambda(p, v);
            if (std::isfinite(fv) && fv < fu) {
                u = std::move(v);
                fu = fv;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            // Stalled against a kink: the minimizer may sit exactly on a
            // breakpoint, or some coordinates may need to be pinned there so
            // the remaining ones can keep descending. A snapped point is
            // taken either when it already certifies or when it strictly
            // lowers the energy; the strict decrease rules out cycling.
            for (double r : {1e-12, 1e-9, 1e-6, 1e-3}) {
                if (auto v = snapped(p, u, r)) {
                    if (residual(p, *v) <= cfg.tol_residual) return certify(p, std::move(*v));
                    const double fv = j_lambda(p, *v);
                    if (std::isfinite(fv) && fv < fu) {
                        u = std::move(*v);
                        fu = fv;
                        accepted = true;
                        break;
                    }
                }
            }
            if (!accepted) break;
        }
        if (observer) observer(u, fu);
    }

    if (residual(p, u) <= cfg.tol_residual) return certify(p, std::move(u));
    // Energy comparisons bottom out at the precision of J, which can leave
    // the residual orders of magnitude above the tolerance; a residual-driven
    // polish is immune to that floor and finishes the certification.
    std::vector<double> polished = refine_to_solution(p, u, cfg.tol_residual);
    if (residual(p, polished) <= cfg.tol_residual) return certify(p, std::move(polished));
    CertifiedSolution best = certify(
        p, residual(p, polished) < residual(p, u) ? std::move(polished) : std::move(u),
        SolutionKind::unclassified);
    throw DidNotConverge("descent did not reach the residual tolerance", std::move(best));
}

MultiplicityReport multistart(const InclusionProblem& p, const SolveConfig& cfg,
                              std::optional<double> delta) {
    validate_config(cfg);
    const size_t T = static_cast<size_t>(p.order());

    std::vector<std::pair<std::vector<double>, std::string>> starts;
    starts.emplace_back(std::vector<double>(T, 0.0), "zero-start");
    if (delta) {
        starts.emplace_back(std::vector<double>(T, *delta), "delta-start");
        starts.emplace_back(std::vector<double>(T, -*delta), "delta-start");
    }

    // Crude coercivity box: any finite box containing the negative-energy
    // sublevel set works, sized from the windowed potential bound.
    const double delta_eff = delta.value_or(1.0);
    double mhat = 0.0;
    for (size_t k = 0; k < T; ++k) mhat = std::max(mhat, p.nonlinearity(k).sup_potential(delta_eff));
    const double lam1 = spectrum(p.matrix()).lambda_min;
    double rbox = 2.0 * std::max(delta_eff, std::sqrt(2.0 * static_cast<double>(T) * mhat / lam1));
    if (!(rbox > 0.0) || !std::isfinite(rbox)) rbox = 1.0;

    std::mt19937_64 rng(cfg.seed);
    while (starts.size() < static_cast<size_t>(cfg.starts)) {
        std::vector<double> s(T);
        for (double& x : s) x = -rbox + 2.0 * rbox * uniform_unit(rng);
        starts.emplace_back(std::move(s), "multistart");
    }

    std::vector<Found> found;
    for (auto& [s, origin] : starts) {
        try {
            found.push_back(Found{minimize_from(p, s, cfg), origin});
        } catch (const DidNotConverge&) {
            // A start that never certifies contributes nothing.
        }
    }
    cluster(found, cfg.tol_distinct);

    // Saddles separating adjacent minima are part of the solution set; sweep
    // the barrier search over neighboring basins and keep what certifies.
    const std::vector<Found> snapshot = found;
    std::vector<size_t> minima;
    for (size_t i = 0; i < snapshot.size(); ++i)
        if (snapshot[i].sol.kind == SolutionKind::trivial || snapshot[i].sol.kind == SolutionKind::local_min)
            minima.push_back(i);
    for (size_t i = 0; i + 1 < minima.size(); ++i) {
        try {
            CertifiedSolution s =
                mountain_pass(p, snapshot[minima[i]].sol.u, snapshot[minima[i + 1]].sol.u, cfg);
            found.push_back(Found{std::move(s), "barrier-search"});
        } catch (const Error&) {
            // No barrier or no certification between this pair.
        }
    }
    cluster(found, cfg.tol_distinct);
    return to_report(p, std::move(found));
}

CertifiedSolution mountain_pass(const InclusionProblem& p, std::span<const double> u_a,
                                std::span<const double> u_b, const SolveConfig& cfg) {
    validate_config(cfg);
    const size_t T = static_cast<size_t>(p.order());
    if (u_a.size() != T || u_b.size() != T) throw DimensionMismatch("endpoint length does not match order");
    if (dist_inf(u_a, u_b) < cfg.tol_distinct) throw ValidationError("endpoints are not distinct");
    if (residual(p, u_a) > cfg.tol_residual || residual(p, u_b) > cfg.tol_residual)
        throw ValidationError("endpoints must be residual-certified");

    const int N = cfg.path_nodes;
    std::vector<std::vector<double>> path(static_cast<size_t>(N), std::vector<double>(T));
    for (int i = 0; i < N; ++i) {
        const double f = static_cast<double>(i) / (N - 1);
        for (size_t k = 0; k < T; ++k) path[static_cast<size_t>(i)][k] = u_a[k] + f * (u_b[k] - u_a[k]);
    }

    const double e_end = std::max(j_lambda(p, u_a), j_lambda(p, u_b));

    const auto reparametrize = [&]() {
        std::vector<double> s(static_cast<size_t>(N), 0.0);
        for (int i = 1; i < N; ++i) {
            std::vector<double> seg(T);
            for (size_t k = 0; k < T; ++k)
                seg[k] = path[static_cast<size_t>(i)][k] - path[static_cast<size_t>(i - 1)][k];
            s[static_cast<size_t>(i)] = s[static_cast<size_t>(i - 1)] + norm2(seg);
        }
        const double total = s.back();
        if (total <= 0.0) return;
        std::vector<std::vector<double>> fresh(path);
        for (int j = 1; j < N - 1; ++j) {
            const double target = total * static_cast<double>(j) / (N - 1);
            size_t i = 1;
            while (i < static_cast<size_t>(N) - 1 && s[i] < target) ++i;
            const double span = s[i] - s[i - 1];
            const double f = span > 0.0 ? (target - s[i - 1]) / span : 0.0;
            for (size_t k = 0; k < T; ++k)
                fresh[static_cast<size_t>(j)][k] = path[i - 1][k] + f * (path[i][k] - path[i - 1][k]);
        }
        path = std::move(fresh);
    };

    for (int sweep = 0; sweep < 400; ++sweep) {
        double spacing = 0.0;
        for (int i = 1; i < N; ++i) {
            std::vector<double> seg(T);
            for (size_t k = 0; k < T; ++k)
                seg[k] = path[static_cast<size_t>(i)][k] - path[static_cast<size_t>(i - 1)][k];
            spacing += norm2(seg);
        }
        spacing /= (N - 1);

        double moved = 0.0;
        for (int i = 1; i < N - 1; ++i) {
            std::vector<double>& node = path[static_cast<size_t>(i)];
            const std::vector<double> d = descent_direction(p, node);
            const double dn = norm2(d);
            if (dn == 0.0) continue;
            const double f_node = j_lambda(p, node);
            double eta = std::min(cfg.step_init, 0.5 * spacing / dn);
            for (int half = 0; half < 25; ++half, eta *= 0.5) {
                std::vector<double> v(T);
                for (size_t k = 0; k < T; ++k) v[k] = node[k] - eta * d[k];
                if (j_lambda(p, v) < f_node) {
                    moved = std::max(moved, eta * dn);
                    node = std::move(v);
                    break;
                }
            }
        }
        reparametrize();
        if (moved < 1e-12) break;
    }

    int peak = -1;
    double e_peak = -std::numeric_limits<double>::infinity();
    bool any_interior_away = false;
    for (int i = 1; i < N - 1; ++i) {
        const double e = j_lambda(p, path[static_cast<size_t>(i)]);
        if (e > e_peak) {
            e_peak = e;
            peak = i;
        }
        if (dist_inf(path[static_cast<size_t>(i)], u_a) >= cfg.tol_distinct &&
            dist_inf(path[static_cast<size_t>(i)], u_b) >= cfg.tol_distinct)
            any_interior_away = true;
    }
    const double e_slack = 1e-12 * (1.0 + std::abs(e_end));
    const bool collapsed = !any_interior_away || e_peak <= e_end + e_slack;

    if (!collapsed) {
        std::vector<double> u = refine_to_solution(p, path[static_cast<size_t>(peak)], cfg.tol_residual);
        if (residual(p, u) <= cfg.tol_residual)
            return certify(p, std::move(u), SolutionKind::saddle_candidate);
        throw DidNotConverge("saddle polish did not reach the residual tolerance",
                             certify(p, std::move(u), SolutionKind::unclassified));
    }

    // The string cannot resolve a barrier much thinner than its node
    // spacing, which happens when the separating point sits very close to
    // one endpoint. Rescue: locate the energy maximum on the straight
    // segment by a dense scan plus local refinement, then polish that point
    // by residual. With no interior segment maximum there is genuinely no
    // separating barrier to report.
    const auto segment_point = [&](double t) {
        std::vector<double> v(T);
        for (size_t k = 0; k < T; ++k) v[k] = u_a[k] + t * (u_b[k] - u_a[k]);
        return v;
    };
    const int scan = 4096;
    double t_best = -1.0;
    double e_best = e_end + e_slack;
    for (int i = 1; i < scan; ++i) {
        const double t = static_cast<double>(i) / scan;
        const double e = j_lambda(p, segment_point(t));
        if (e > e_best) {
            e_best = e;
            t_best = t;
        }
    }
    if (t_best < 0.0) throw PathCollapse("no separating barrier between the endpoints");
    double window = 1.0 / scan;
    for (int round = 0; round < 3; ++round) {
        const double lo = std::max(0.0, t_best - window);
        const double hi = std::min(1.0, t_best + window);
        for (int i = 0; i <= 128; ++i) {
            const double t = lo + (hi - lo) * static_cast<double>(i) / 128.0;
            const double e = j_lambda(p, segment_point(t));
            if (e > e_best) {
                e_best = e;
                t_best = t;
            }
        }
        window /= 64.0;
    }
    std::vector<double> u = refine_to_solution(p, segment_point(t_best), cfg.tol_residual);
    if (residual(p, u) <= cfg.tol_residual) {
        if (dist_inf(u, u_a) < cfg.tol_distinct || dist_inf(u, u_b) < cfg.tol_distinct)
            throw PathCollapse("the only barrier point polishes onto an endpoint");
        return certify(p, std::move(u), SolutionKind::saddle_candidate);
    }
    throw DidNotConverge("saddle polish did not reach the residual tolerance",
                         certify(p, std::move(u), SolutionKind::unclassified));
}

MultiplicityReport find_multiplicity(const InclusionProblem& p, const SolveConfig& cfg,
                                     MultiplicityClaim claim, std::optional<double> delta) {
    MultiplicityReport rep = multistart(p, cfg, delta);

    const auto count = [&]() -> size_t {
        if (claim == MultiplicityClaim::three_solutions) return rep.solutions.size();
        size_t n = 0;
        for (const CertifiedSolution& s : rep.solutions)
            if (s.kind != SolutionKind::trivial && max_abs(s.u) > cfg.tol_distinct) ++n;
        return n;
    };
    const size_t needed = claim == MultiplicityClaim::three_solutions ? 3 : 2;

    if (count() < needed) {
        std::vector<size_t> minima;
        for (size_t i = 0; i < rep.solutions.size(); ++i)
            if (rep.solutions[i].kind == SolutionKind::trivial ||
                rep.solutions[i].kind == SolutionKind::local_min)
                minima.push_back(i);
        if (minima.size() >= 2) {
            try {
                CertifiedSolution s =
                    mountain_pass(p, rep.solutions[minima[0]].u, rep.solutions[minima[1]].u, cfg);
                bool fresh = true;
                for (const CertifiedSolution& have : rep.solutions)
                    if (dist_inf(have.u, s.u) < cfg.tol_distinct) fresh = false;
                if (fresh) {
                    rep.solutions.push_back(std::move(s));
                    rep.origins.push_back("barrier-search");
                }
            } catch (const Error&) {
            }
        }
    }

    // Re-certify from scratch: stored residual and energy must reproduce.
    for (size_t i = 0; i < rep.solutions.size(); ++i) {
        CertifiedSolution fresh = certify(p, rep.solutions[i].u, rep.solutions[i].kind);
        if (fresh.residual > cfg.tol_residual)
            throw InternalError("a reported solution failed re-certification");
        rep.solutions[i] = std::move(fresh);
    }

    rep.claims_met = count() >= needed;
    return rep;
}

std::vector<CertifiedSolution> brute_force_oracle(const InclusionProblem& p, double radius,
                                                  int points_per_axis, const SolveConfig& cfg) {
    validate_config(cfg);
    const int T = p.order();
    if (T > 3) throw TooLarge("exhaustive scan supports order <= 3, got " + std::to_string(T));
    if (!(radius > 0.0)) throw OutOfRange("radius must be positive");
    if (points_per_axis < 2) throw OutOfRange("need at least two points per axis");

    const double spacing = 2.0 * radius / (points_per_axis - 1);

    // Axis coordinates: the lattice plus every breakpoint in range plus zero,
    // so solutions sitting exactly on a jump are probed at the exact abscissa.
    std::vector<std::vector<double>> axes(static_cast<size_t>(T));
    for (int k = 0; k < T; ++k) {
        std::vector<double>& ax = axes[static_cast<size_t>(k)];
        for (int i = 0; i < points_per_axis; ++i) ax.push_back(-radius + spacing * i);
        for (double b : p.nonlinearity(static_cast<size_t>(k)).breakpoints())
            if (b >= -radius && b <= radius) ax.push_back(b);
        ax.push_back(0.0);
        std::sort(ax.begin(), ax.end());
        ax.erase(std::unique(ax.begin(), ax.end()), ax.end());
    }

    // Residual drift over one cell: operator row sums plus the steepest
    // envelope slope in range bound the Lipschitz constant.
    double slope = 0.0;
    for (int k = 0; k < T; ++k) {
        const auto& g = p.nonlinearity(static_cast<size_t>(k));
        const auto& bp = g.breakpoints();
        for (size_t i = 0; i < g.segments().size(); ++i) {
            const double lo = i == 0 ? -radius : std::max(-radius, bp[i - 1]);
            const double hi = i == bp.size() ? radius : std::min(radius, bp[i]);
            if (lo > hi) continue;
            slope = std::max(slope, p.weight(static_cast<size_t>(k)) *
                                        g.segments()[i].derivative().max_abs_on(lo, hi));
        }
    }
    const double keep_tol = std::max(cfg.tol_residual, spacing * (p.matrix().norm_inf() + p.lambda() * slope));

    std::vector<Found> seeds;
    std::vector<double> u(static_cast<size_t>(T), 0.0);
    std::vector<size_t> idx(static_cast<size_t>(T), 0);
    while (true) {
        for (int k = 0; k < T; ++k) u[static_cast<size_t>(k)] = axes[static_cast<size_t>(k)][idx[static_cast<size_t>(k)]];
        const double r = residual(p, u);
        if (r <= keep_tol)
            seeds.push_back(Found{CertifiedSolution{u, r, j_lambda(p, u), SolutionKind::unclassified}, ""});
        int k = 0;
        for (; k < T; ++k) {
            if (++idx[static_cast<size_t>(k)] < axes[static_cast<size_t>(k)].size()) break;
            idx[static_cast<size_t>(k)] = 0;
        }
        if (k == T) break;
    }

    // Collapse each cell-sized clump of seeds to its best member before the
    // costly refinement; distinct solutions closer than the lattice pitch are
    // beyond the scan's resolution anyway.
    std::sort(seeds.begin(), seeds.end(), [](const Found& x, const Found& y) {
        if (x.sol.residual != y.sol.residual) return x.sol.residual < y.sol.residual;
        return lex_less(x.sol.u, y.sol.u);
    });
    std::vector<Found> reps;
    for (Found& s : seeds) {
        bool close = false;
        for (const Found& r : reps)
            if (dist_inf(s.sol.u, r.sol.u) <= 2.0 * spacing) {
                close = true;
                break;
            }
        if (!close) reps.push_back(std::move(s));
    }

    std::vector<Found> out;
    for (const Found& seed : reps) {
        if (seed.sol.residual <= cfg.tol_residual) out.push_back(Found{certify(p, seed.sol.u), "lattice"});
        std::vector<double> w = refine_to_solution(p, seed.sol.u, cfg.tol_residual);
        if (residual(p, w) <= cfg.tol_residual) out.push_back(Found{certify(p, std::move(w)), "lattice"});
        try {
            out.push_back(Found{minimize_from(p, seed.sol.u, cfg), "lattice"});
        } catch (const DidNotConverge&) {
        }
    }
    cluster(out, cfg.tol_distinct);

    std::vector<CertifiedSolution> solutions;
    for (Found& f : out) solutions.push_back(std::move(f.sol));
    return solutions;
}

} // namespace diffinc
