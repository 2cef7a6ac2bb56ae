// qstat: scenario-driven quantum statistics toolbox.
//   run <file> [--out DIR]   execute a scenario document
//   demo <name> [--out DIR]  run a built-in demo with embedded checks
//   validate <file>          parse and validate a scenario, no execution
//   list-demos               print the built-in demo names
// Exit codes: 0 ok, 1 expectation failure, 2 usage/parse error, 3 numerical error.

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "qstat/csv.hpp"
#include "qstat/demos.hpp"
#include "qstat/scenario.hpp"

namespace {

int error_exit(const qstat::Error& e) {
    std::cerr << e.what() << "\n";
    return e.category() == qstat::ErrorCategory::parse ? 2 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum statistics scenarios: states, actions, quasiprobabilities"};
    app.require_subcommand(1);
    // let --hbar/--si/--seed appear after the subcommand too
    app.fallthrough();

    double hbar_flag = 0;
    bool si_flag = false;
    std::uint64_t seed_flag = 0;
    CLI::Option* hbar_opt = app.add_option("--hbar", hbar_flag, "default hbar for scenarios");
    CLI::Option* si_opt = app.add_flag("--si", si_flag, "use SI constants (hbar in J s)");
    CLI::Option* seed_opt =
        app.add_option("--seed", seed_flag, "seed for random builders")->envname("QSTAT_SEED");

    std::string run_file, run_out = ".";
    CLI::App* run_cmd = app.add_subcommand("run", "execute a scenario file");
    run_cmd->add_option("file", run_file, "scenario JSON document")->required();
    run_cmd->add_option("--out", run_out, "output directory for declared files");

    std::string demo_name, demo_out = "qstat_out";
    CLI::App* demo_cmd = app.add_subcommand("demo", "run a built-in demo");
    demo_cmd->add_option("name", demo_name, "demo name (see list-demos)")->required();
    demo_cmd->add_option("--out", demo_out, "output directory for demo files");

    std::string validate_file;
    CLI::App* validate_cmd = app.add_subcommand("validate", "validate a scenario file");
    validate_cmd->add_option("file", validate_file, "scenario JSON document")->required();

    CLI::App* list_cmd = app.add_subcommand("list-demos", "print built-in demo names");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    qstat::RunOptions opts;
    if (*hbar_opt) opts.hbar = hbar_flag;
    if (si_flag && !*hbar_opt) opts.hbar = qstat::si::hbar;
    if (*seed_opt) opts.seed = seed_flag;

    try {
        if (*list_cmd) {
            for (const std::string& n : qstat::demo_names()) std::cout << n << "\n";
            return 0;
        }
        if (*validate_cmd) {
            qstat::Scenario s = qstat::parse_scenario(qstat::read_text_file(validate_file), opts);
            std::cout << "valid: " << s.name << " (" << s.tasks.size() << " tasks)\n";
            return 0;
        }
        if (*run_cmd) {
            opts.out_dir = run_out;
            qstat::Scenario s = qstat::parse_scenario(qstat::read_text_file(run_file), opts);
            qstat::RunReport report = qstat::run_scenario(s, opts);
            std::cout << report.render();
            return report.exit_code();
        }
        opts.out_dir = demo_out;
        qstat::RunReport report = qstat::run_demo(demo_name, opts);
        std::cout << report.render();
        return report.exit_code();
    } catch (const qstat::Error& e) {
        return error_exit(e);
    } catch (const std::exception& e) {
        std::cerr << e.what() << "\n";
        return 3;
    }
}
