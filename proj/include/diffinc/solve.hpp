#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "diffinc/errors.hpp"
#include "diffinc/variational.hpp"

namespace diffinc {

/// Classification attached to a certified solution.
///  - trivial: the exact zero vector,
///  - local_min: passes the coordinate perturbation probe of the energy,
///  - saddle_candidate: produced by the barrier search between two minima,
///  - unclassified: certified by residual only.
enum class SolutionKind { trivial, local_min, saddle_candidate, unclassified };

const char* to_string(SolutionKind k);

/// Residual-certified point together with its energy and classification.
struct CertifiedSolution {
    std::vector<double> u;
    double residual;
    double energy;
    SolutionKind kind;
};

/// Solver knobs. Every default is part of the reproducibility contract.
struct SolveConfig {
    double tol_residual = 1e-8;  ///< certification threshold on the residual
    double tol_distinct = 1e-4;  ///< max-norm radius for clustering distinct solutions
    int starts = 64;             ///< total descent starts in a multistart run
    std::uint64_t seed = 12345;  ///< generator seed for the random starts
    long max_iters = 100000;     ///< per-start descent iteration cap
    double step_init = 1.0;      ///< initial backtracking step
    int path_nodes = 33;         ///< states on the barrier-search path
};

/// Descent outcome carried inside the nonconvergence error.
struct DidNotConverge : Error {
    CertifiedSolution best;
    DidNotConverge(std::string what, CertifiedSolution best_point)
        : Error(std::move(what)), best(std::move(best_point)) {}
};

/// Which claim a multiplicity run is asked to meet.
///  - three_solutions: at least three distinct solutions (zero may be one),
///  - two_nontrivial: at least two distinct nonzero solutions.
enum class MultiplicityClaim { three_solutions, two_nontrivial };

/// Certified solutions found for one parameter value, each tagged with the
/// route that produced it ("zero-start", "delta-start", "multistart",
/// "barrier-search"), sorted by ascending energy.
struct MultiplicityReport {
    std::vector<CertifiedSolution> solutions;
    std::vector<std::string> origins;
    double lambda;
    bool claims_met;
};

/// Residual, energy and classification of a given point, without moving it.
CertifiedSolution certify(const InclusionProblem& p, std::vector<double> u,
                          std::optional<SolutionKind> kind_hint = std::nullopt);

/// Projected descent with monotone backtracking from the given start.
///
/// Each iteration steps against descent_direction, halving the step until the
/// energy decreases (stall below 1e-14 step ends the run); the step resets
/// after every accepted move. Components drifting toward a nonlinearity
/// breakpoint are snapped onto it whenever the snapped point certifies; this
/// is how solutions sitting exactly on a jump are reached. Raises
/// DidNotConverge (best point inside) if the residual never meets the
/// tolerance. The observer, when set, sees every accepted iterate.
CertifiedSolution minimize_from(const InclusionProblem& p, std::span<const double> start,
                                const SolveConfig& cfg,
                                const std::function<void(std::span<const double>, double)>& observer = {});

/// Descent from the zero vector, from +/- delta times the all-ones vector
/// when delta is given, and from cfg.starts minus those random points in a
/// box sized from the coercivity radius. Clusters results by tol_distinct,
/// then runs the barrier search between adjacent distinct minima so that
/// saddle points lying between them are reported as well. Deterministic for
/// a fixed seed. Solutions are sorted by ascending energy.
MultiplicityReport multistart(const InclusionProblem& p, const SolveConfig& cfg,
                              std::optional<double> delta = std::nullopt);

/// String-method barrier search between two residual-certified minima.
///
/// Relaxes an equal-arc-length path of cfg.path_nodes states, then polishes
/// the highest-energy interior state to a residual-certified point. Raises
/// PathCollapse when the relaxed path shows no separating barrier (all
/// interior states cluster at the endpoints, or no interior energy exceeds
/// both endpoint energies). Raises DidNotConverge when polishing fails.
CertifiedSolution mountain_pass(const InclusionProblem& p, std::span<const double> u_a,
                                std::span<const double> u_b, const SolveConfig& cfg);

/// Full pipeline for one parameter value: certify zero, multistart, and if
/// the claimed count is not yet met a barrier search between the two
/// lowest-energy distinct minima. claims_met records whether the requested
/// multiplicity was reached.
MultiplicityReport find_multiplicity(const InclusionProblem& p, const SolveConfig& cfg,
                                     MultiplicityClaim claim, std::optional<double> delta = std::nullopt);

/// Independent exhaustive check for order <= 3: scans a cubic lattice of
/// points_per_axis points per axis on [-radius, radius] (axis coordinates are
/// augmented with the exact nonlinearity breakpoints in range), keeps lattice
/// points whose residual is below a lattice-spacing-scaled threshold, refines
/// each kept point both toward a nearby residual zero and by descent, and
/// returns the distinct certified solutions sorted by energy.
std::vector<CertifiedSolution> brute_force_oracle(const InclusionProblem& p, double radius,
                                                  int points_per_axis, const SolveConfig& cfg = {});

} // namespace diffinc
