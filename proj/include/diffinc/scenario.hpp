#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "diffinc/hypotheses.hpp"
#include "diffinc/matrix.hpp"
#include "diffinc/piecewise.hpp"
#include "diffinc/solve.hpp"

namespace diffinc {

/// Run families the front end understands. Each selects which hypothesis
/// check gates the run and which multiplicity claim must be met: the first
/// four demand three distinct solutions, the last two demand two nontrivial
/// ones. The names are the `kind` strings of the scenario file format.
enum class ScenarioKind { theorem31, theorem41, section42, theorem42, corollary32, theorem11 };

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from(const std::string& name);

/// A fully validated run description, as loaded from a scenario file.
struct Scenario {
    std::string name;
    ScenarioKind kind;
    std::string matrix_type; ///< tridiagonal | second_order | fourth_order | grid | explicit
    SpdMatrix matrix;
    std::optional<GridShape> grid;      ///< set when matrix_type == "grid"
    std::optional<double> tridiag_a;    ///< set for tridiagonal-family matrices of order >= 2
    std::optional<double> tridiag_b;
    std::vector<PiecewiseNonlinearity> nonlinearities; ///< one per component
    bool shared_nonlinearity = false;   ///< true when the file gave a single shared g
    std::optional<WeightVector> weights;
    std::optional<double> gamma;
    std::optional<double> delta;
    std::variant<double, std::string> lambda_spec; ///< a positive number, or "auto_mid"
    SolveConfig solve;
};

/// Build a Scenario from a parsed document. Shape or value problems raise
/// ValidationError (unknown keys included, to catch typos early).
Scenario parse_scenario(const nlohmann::json& doc);

/// Read and parse a scenario file. Unreadable files and malformed JSON raise
/// ParseError; semantic problems raise ValidationError as above.
Scenario load_scenario_file(const std::string& path);

/// Outcome of a full scenario run.
struct RunResult {
    int exit_code = 0;         ///< 0 claims met; 2 hypotheses unsatisfied; 3 solver shortfall
    nlohmann::json report;     ///< full machine-readable report document
    std::string solutions_csv; ///< byte-deterministic solution table
};

/// Check hypotheses, resolve lambda, run the multiplicity search, and
/// assemble the report. Non-finite report numbers serialize as JSON null.
/// When the hypotheses fail, no solve is attempted: the report carries the
/// hypothesis fields, an empty solution list, and exit code 2.
RunResult run_scenario(const Scenario& s);

/// Hypothesis evaluation only: the `hypothesis` sub-document of the full
/// report, with `satisfied` set accordingly. No solve is attempted.
nlohmann::json check_hypotheses(const Scenario& s, bool& satisfied);

/// run_scenario plus writing report.json and solutions.csv into out_dir
/// (created if absent).
RunResult run_and_write(const Scenario& s, const std::string& out_dir);

/// Convenience wrapper: load the file, then run_and_write.
RunResult run_scenario_file(const std::string& path, const std::string& out_dir);

} // namespace diffinc
