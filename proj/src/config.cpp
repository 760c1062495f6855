#include "wmb/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace wmb {

Command parse_command(const std::string& name) {
    if (name == "eigen") return Command::eigen;
    if (name == "functionals") return Command::functionals;
    if (name == "modulation") return Command::modulation;
    if (name == "rate") return Command::rate;
    if (name == "all") return Command::all;
    throw UsageError("unknown command '" + name +
                     "' (expected eigen|functionals|modulation|rate|all)");
}

std::string command_name(Command c) {
    switch (c) {
        case Command::eigen: return "eigen";
        case Command::functionals: return "functionals";
        case Command::modulation: return "modulation";
        case Command::rate: return "rate";
        case Command::all: return "all";
    }
    return "?";
}

void RunConfig::validate() const {
    if (!(nu_min > 1e-7) || !(nu_max <= 1e-2))
        throw UsageError("nu grid endpoints must lie in (1e-7, 1e-2]");
    if (!(nu_min <= nu_max))
        throw UsageError("nu-min must not exceed nu-max");
    if (nu_count < 1 || nu_count > 200)
        throw UsageError("nu-count must lie in [1, 200]");
    if (delta0 < 0.02 || delta0 > 0.1)
        throw UsageError("delta0 must lie in [0.02, 0.1]");
    if (!(ode_tol > 0.0) || !(root_tol > 0.0))
        throw UsageError("tolerances must be positive");
    if (format != "csv" && format != "json")
        throw UsageError("format must be csv or json");
    if (jobs < 1 || jobs > 256) throw UsageError("jobs must lie in [1, 256]");
    if ((command == Command::modulation || command == Command::all)) {
        if (!(tau0 >= 25.0)) throw UsageError("tau0 must be >= 25");
        if (!(tau_end >= 10.0 * tau0))
            throw UsageError("tau-end must be >= 10*tau0");
        if (!(nu_min < 1e-3))
            throw UsageError("modulation requires nu-min < 1e-3 (used as nu0)");
    }
    if (command == Command::all && out.empty())
        throw UsageError("command 'all' requires --out (used as a path prefix)");
}

std::vector<double> RunConfig::nu_grid() const {
    std::vector<double> grid;
    if (nu_count == 1) {
        grid.push_back(nu_max);
        return grid;
    }
    const double l0 = std::log(nu_max), l1 = std::log(nu_min);
    for (int i = 0; i < nu_count; i++) {
        // keep the endpoints exact; exp(log x) can drift by an ulp
        if (i == 0) grid.push_back(nu_max);
        else if (i == nu_count - 1) grid.push_back(nu_min);
        else grid.push_back(std::exp(l0 + (l1 - l0) * i / (nu_count - 1)));
    }
    return grid;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);

    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        lineno++;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto strip = [](std::string s) {
            const auto b = s.find_first_not_of(" \t\r");
            const auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) +
                             ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));

        auto as_double = [&](const char* name) {
            try {
                std::size_t used = 0;
                const double v = std::stod(value, &used);
                if (used != value.size()) throw std::invalid_argument(value);
                return v;
            } catch (const std::exception&) {
                throw UsageError(path + ": bad numeric value for " +
                                 std::string(name) + ": '" + value + "'");
            }
        };

        if (key == "command") base.command = parse_command(value);
        else if (key == "nu-min") base.nu_min = as_double("nu-min");
        else if (key == "nu-max") base.nu_max = as_double("nu-max");
        else if (key == "nu-count") base.nu_count = static_cast<int>(as_double("nu-count"));
        else if (key == "delta0") base.delta0 = as_double("delta0");
        else if (key == "ode-tol") base.ode_tol = as_double("ode-tol");
        else if (key == "root-tol") base.root_tol = as_double("root-tol");
        else if (key == "tau0") base.tau0 = as_double("tau0");
        else if (key == "tau-end") base.tau_end = as_double("tau-end");
        else if (key == "format") base.format = value;
        else if (key == "out") base.out = value;
        else if (key == "jobs") base.jobs = static_cast<int>(as_double("jobs"));
        else
            throw UsageError(path + ": unknown config key '" + key + "'");
    }
    return base;
}

} // namespace wmb
