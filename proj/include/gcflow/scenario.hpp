#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gcflow/flow.hpp"

namespace gcflow {

//! Configuration error with the offending field path.
struct ScenarioError : std::runtime_error {
    explicit ScenarioError(const std::string& field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_path(field) {}
    std::string field_path;
};

struct AssertSpec {
    std::string check;  // q_monotone | j_monotone | conserved_drift |
                        // residual_target | corridor | evenness | uniqueness_pair
    double tol = 0.0;
};

struct Scenario {
    std::string name;
    std::string kind = "flow";  // flow | ellipsoid_j
    FlowProblem problem;
    std::optional<InitialShape> initial_b;  // second run of a uniqueness pair
    std::string expected_verdict = "converged";  // converged|timeout|shrinking|failure
    std::vector<AssertSpec> asserts;
    std::optional<double> reference_rho0;  // analytic equilibrium radius, when known
    bool exploratory = false;              // out-of-regime runs must opt in

    // kind == ellipsoid_j
    double e1 = 0.9, e2 = 0.5;
    int ell_n = 2;
    double ell_a = 0.25;
};

Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& json_text);

struct AssertResult {
    std::string check;
    bool pass = false;
    double value = 0.0;
    double tol = 0.0;
};

struct ScenarioOutcome {
    std::string name;
    bool pass = false;
    std::string verdict;
    std::string regime;
    std::vector<AssertResult> asserts;
    FlowResult result;            // primary run (flow kind)
    std::optional<FlowResult> result_b;
    double j_value = 0.0;         // ellipsoid_j kind
    double uhat_max = 0.0;
    double reference_error = std::numeric_limits<double>::quiet_NaN();
};

//! Runs a scenario and writes trace.csv / profile_final.csv / summary.json
//! under out_dir/<name>/. Exit-style boolean: verdict matches the declared
//! one and every assert holds.
ScenarioOutcome run_scenario(const Scenario& scenario,
                             const std::string& out_dir, bool quiet);

//! Runs the scenario once per value of the swept parameter
//! (alpha | N | cfl | f-amplitude | e1) and writes aggregate.csv. Per-instance
//! failures are recorded and the sweep continues.
int run_sweep(const Scenario& base, const std::string& param,
              const std::vector<double>& values, const std::string& out_dir,
              bool quiet);

//! Runs every scenario listed in a suite file; returns the number of failures.
int run_suite(const std::string& suite_path, const std::string& out_dir,
              bool quiet);

} // namespace gcflow
