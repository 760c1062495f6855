// Sweep drivers behind the CLI: the eigen and functionals grids (work-
// stealing over grid cells, ordered collection), the modulation run, the
// rate table, and the command dispatcher with the exit-code contract
// 0 success, 2 all-rows-failed, 3 shooting failure, 64 usage, 74 I/O.

#ifndef WMB_SWEEP_HPP
#define WMB_SWEEP_HPP

#include <iosfwd>
#include <string>

#include "wmb/config.hpp"
#include "wmb/report.hpp"

namespace wmb {

struct SweepResult {
    Table table;
    std::size_t failed_rows = 0;
    std::string summary;     // non-empty for modulation
};

SweepResult run_eigen_sweep(const RunConfig& cfg);
SweepResult run_functionals(const RunConfig& cfg);
SweepResult run_modulation(const RunConfig& cfg);   // throws ShootingFailure
SweepResult run_rate(const RunConfig& cfg);

// Dispatches cfg.command, emits the report(s), prints summaries to `info`.
// Returns the process exit code.
int run_command(const RunConfig& cfg, std::ostream& info);

} // namespace wmb

#endif
