// Run configuration: command selection, the nu grid, tolerances, output
// format, and the flat key=value config-file loader.  Flags parsed by the
// CLI override file values.

#ifndef WMB_CONFIG_HPP
#define WMB_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace wmb {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command { eigen, functionals, modulation, rate, all };

Command parse_command(const std::string& name);
std::string command_name(Command c);

struct RunConfig {
    Command command = Command::eigen;
    double nu_min = 1e-4;
    double nu_max = 1e-2;
    int nu_count = 5;
    double delta0 = 0.05;
    double ode_tol = 1e-11;
    double root_tol = 1e-8;
    double tau0 = 25.0;
    double tau_end = 1e8;
    std::string format = "csv";
    std::string out;        // empty -> stdout
    int jobs = 1;

    void validate() const;              // throws UsageError
    std::vector<double> nu_grid() const; // log-spaced, descending
};

// Loads `key = value` lines (# comments, blank lines allowed) over `base`.
// Unknown keys raise UsageError; missing file raises IoError.
RunConfig load_config_file(const std::string& path, RunConfig base);

} // namespace wmb

#endif
