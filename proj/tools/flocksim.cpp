// Command-line front end: run scenarios, verify the property suites, and
// compare the planner against the analytic oracle.

#include <cstdio>
#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "flock/acceptance.hpp"
#include "flock/log_io.hpp"
#include "flock/metrics.hpp"
#include "flock/scenario_io.hpp"
#include "flock/simulator.hpp"

namespace {

constexpr const char* kVersion = "flocksim 1.0.0";

int cmd_run(const std::string& scenario_path, const std::string& out_dir) {
    flock::ScenarioSpec spec;
    try {
        spec = flock::load_scenario(scenario_path);
    } catch (const std::exception& e) {
        std::cerr << "scenario validation failed: " << e.what() << "\n";
        return 2;
    }
    const std::string warning = flock::validate(spec.config);
    if (!warning.empty()) std::cerr << "warning: " << warning << "\n";

    flock::SimulationLog log;
    try {
        log = flock::run(spec);
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << "\n";
        return 2;
    }
    const flock::RunReport report = flock::make_report(log);
    try {
        flock::write_run_outputs(out_dir, log, report);
    } catch (const std::exception& e) {
        std::cerr << "output failed: " << e.what() << "\n";
        return 2;
    }
    std::cout << flock::report_text(report);
    if (!log.safety_failures.empty()) {
        std::cerr << "hard safety violated " << log.safety_failures.size()
                  << " time(s); see events.log\n";
        return 1;
    }
    return 0;
}

int print_results(const std::vector<flock::CheckResult>& results) {
    int failures = 0;
    for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << " — " << r.detail;
        std::cout << "\n";
        if (!r.pass) ++failures;
    }
    return failures == 0 ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"constraint-driven flocking simulator"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string scenario_path;
    std::string out_dir = "out";
    CLI::App* run_cmd = app.add_subcommand("run", "simulate a scenario file");
    run_cmd->add_option("scenario", scenario_path, "scenario file")->required();
    run_cmd->add_option("--out", out_dir, "output directory (trajectory.csv, events.log, report.txt)");

    std::string suite;
    CLI::App* verify_cmd =
        app.add_subcommand("verify", "run a property suite on built-in scenarios");
    verify_cmd->add_option("suite", suite,
                           "continuity | switch | consensus | safety | diameter | all")
        ->required();

    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "compare the planner against the analytic arcs");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run_cmd->parsed()) return cmd_run(scenario_path, out_dir);
        if (verify_cmd->parsed()) return print_results(flock::verify_suite(suite));
        if (oracle_cmd->parsed()) return print_results(flock::oracle_battery());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::cout << app.help();
    return 0;
}
