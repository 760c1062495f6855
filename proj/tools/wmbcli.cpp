// Command-line front end: flat key=value config file plus flag overrides
// (flags win), nu-grid sweeps, and CSV/JSON report emission.

#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wmb/config.hpp"
#include "wmb/modulation.hpp"
#include "wmb/profiles.hpp"
#include "wmb/report.hpp"
#include "wmb/sweep.hpp"

int main(int argc, char** argv) {
    using namespace wmb;

    // locate --config before the main parse so flags override file values
    std::string config_path;
    for (int i = 1; i < argc; i++) {
        const std::string arg = argv[i];
        if (arg == "--config" && i + 1 < argc) config_path = argv[i + 1];
        else if (arg.rfind("--config=", 0) == 0) config_path = arg.substr(9);
    }

    RunConfig cfg;
    try {
        if (!config_path.empty()) cfg = load_config_file(config_path, cfg);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 74;
    }

    CLI::App app{"spectral and modulation toolkit for equivariant "
                 "self-similar blow-up"};
    std::string command = command_name(cfg.command);
    std::string dummy_config;
    app.add_option("--command", command,
                   "eigen | functionals | modulation | rate | all");
    app.add_option("--nu-min", cfg.nu_min, "smallest nu of the sweep grid");
    app.add_option("--nu-max", cfg.nu_max, "largest nu of the sweep grid");
    app.add_option("--nu-count", cfg.nu_count, "log-spaced grid size");
    app.add_option("--delta0", cfg.delta0, "matching radius");
    app.add_option("--ode-tol", cfg.ode_tol, "relative ODE tolerance");
    app.add_option("--root-tol", cfg.root_tol, "eigenvalue tolerance");
    app.add_option("--tau0", cfg.tau0, "start of the modulation run");
    app.add_option("--tau-end", cfg.tau_end, "end of the sharp integration");
    app.add_option("--format", cfg.format, "csv or json");
    app.add_option("--out", cfg.out, "output path (prefix for 'all')");
    app.add_option("--jobs", cfg.jobs, "parallel workers over grid cells");
    app.add_option("--config", dummy_config, "key=value config file");
    std::string dump_profiles;
    app.add_option("--dump-profiles", dump_profiles,
                   "write the cached corrector table (y,T1,S1,U1) as CSV and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 64;
    }

    try {
        if (!dump_profiles.empty()) {
            Table t;
            t.columns = {"y", "T1", "S1", "U1"};
            for (const auto& row : InnerCorrectors::instance().dump_nodes())
                t.add_row({Cell(row[0]), Cell(row[1]), Cell(row[2]), Cell(row[3])});
            emit_report(t, "csv", dump_profiles);
            return 0;
        }
        cfg.command = parse_command(command);
        return run_command(cfg, std::cerr);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 64;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 74;
    } catch (const ShootingFailure& e) {
        std::cerr << "shooting failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
