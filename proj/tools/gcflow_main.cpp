// Command-line driver: run a scenario, sweep a parameter, or verify a suite.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gcflow/scenario.hpp"

namespace {

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos < csv.size()) {
        std::size_t next = csv.find(',', pos);
        if (next == std::string::npos) next = csv.size();
        out.push_back(std::stod(csv.substr(pos, next - pos)));
        pos = next + 1;
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"prescribed Gauss curvature flow runner"};
    app.require_subcommand(1);

    std::string out_dir = "out";
    bool quiet = false;
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--quiet", quiet, "suppress progress output");

    std::string scenario_path, suite_path, param, values_csv;

    CLI::App* cmd_run = app.add_subcommand("run", "run one scenario file");
    cmd_run->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();

    CLI::App* cmd_sweep =
        app.add_subcommand("sweep", "run a scenario across parameter values");
    cmd_sweep->add_option("scenario", scenario_path, "scenario JSON file")
        ->required();
    cmd_sweep->add_option("--param", param, "alpha | N | cfl | f-amplitude | e1")
        ->required();
    cmd_sweep->add_option("--values", values_csv, "comma-separated values")
        ->required();

    CLI::App* cmd_verify =
        app.add_subcommand("verify", "run every scenario in a suite file");
    cmd_verify->add_option("suite", suite_path, "suite JSON file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (cmd_run->parsed()) {
            const gcflow::Scenario s = gcflow::load_scenario(scenario_path);
            const gcflow::ScenarioOutcome o =
                gcflow::run_scenario(s, out_dir, quiet);
            if (!o.pass) {
                std::fprintf(stderr, "scenario %s failed (verdict %s)\n",
                             o.name.c_str(), o.verdict.c_str());
                return 1;
            }
            return 0;
        }
        if (cmd_sweep->parsed()) {
            const gcflow::Scenario s = gcflow::load_scenario(scenario_path);
            const int failures = gcflow::run_sweep(
                s, param, parse_values(values_csv), out_dir, quiet);
            if (failures) {
                std::fprintf(stderr, "%d sweep instance(s) failed\n", failures);
                return 1;
            }
            return 0;
        }
        const int failures = gcflow::run_suite(suite_path, out_dir, quiet);
        if (failures) {
            std::fprintf(stderr, "%d scenario(s) failed\n", failures);
            return 1;
        }
        return 0;
    } catch (const gcflow::ScenarioError& e) {
        std::fprintf(stderr, "configuration error at %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
