#include "wmb/sweep.hpp"

#include <atomic>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <thread>
#include <vector>

#include "wmb/eigensolver.hpp"
#include "wmb/functionals.hpp"
#include "wmb/modulation.hpp"
#include "wmb/profiles.hpp"

namespace wmb {

namespace {

// work-stealing over independent row tasks; results land in preallocated
// slots so ordering and byte output are independent of the job count
void parallel_for(std::size_t count, int jobs,
                  const std::function<void(std::size_t)>& task) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; i++) task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            task(i);
        }
    };
    std::vector<std::thread> pool;
    const int n = std::min<int>(jobs, static_cast<int>(count));
    pool.reserve(n);
    for (int t = 0; t < n; t++) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

SpectralContext make_context(const RunConfig& cfg, double nu) {
    SpectralContext ctx;
    ctx.nu = nu;
    ctx.delta0 = cfg.delta0;
    ctx.ode_tol = cfg.ode_tol;
    ctx.root_tol = cfg.root_tol;
    return ctx;
}

} // namespace

SweepResult run_eigen_sweep(const RunConfig& cfg) {
    const auto grid = cfg.nu_grid();
    const std::size_t n_rows = grid.size() * 2;

    SweepResult res;
    res.table.columns = {"nu",      "j",       "lambda",     "lambda_hat",
                         "gap_over_nu2L", "c_match", "defect",
                         "iterations",    "ansatz_ratio",   "status"};

    // the corrector tables are shared by every row; build them up front so
    // worker threads only read
    InnerCorrectors::instance();

    std::vector<std::vector<Cell>> rows(n_rows);
    std::atomic<std::size_t> failed{0};

    parallel_for(n_rows, cfg.jobs, [&](std::size_t i) {
        const double nu = grid[i / 2];
        const int j = static_cast<int>(i % 2);
        try {
            const SpectralContext ctx = make_context(cfg, nu);
            const EigenPair pair = find_eigenpair(ctx, j);
            const auto phi = eigenfunction(ctx, pair);
            const AnsatzResidual ar = ansatz_residual(ctx, *phi);
            const double l = ctx.log_nu_abs();
            rows[i] = {Cell(nu),
                       Cell(j),
                       Cell(pair.lambda),
                       Cell(pair.lambda_hat),
                       Cell(std::fabs(pair.lambda - pair.lambda_hat) /
                            (nu * nu * l)),
                       Cell(pair.c_match),
                       Cell(pair.defect),
                       Cell(pair.iterations),
                       Cell(ar.sup_ratio),
                       Cell("ok")};
        } catch (const std::exception& e) {
            failed.fetch_add(1);
            rows[i] = {Cell(nu), Cell(j), Cell(), Cell(), Cell(),
                       Cell(),  Cell(),  Cell(), Cell(),
                       Cell(std::string("failed: ") + e.what())};
        }
    });

    for (auto& r : rows) res.table.add_row(std::move(r));
    res.failed_rows = failed.load();
    return res;
}

SweepResult run_functionals(const RunConfig& cfg) {
    const auto grid = cfg.nu_grid();

    SweepResult res;
    res.table.columns = {
        "nu",    "lambda0", "lambda1", "t00",   "t01",   "t10",   "t11",
        "frkb0", "frkb1",   "frkc0",   "frkc1", "inv_a0", "inv_a1",
        "inv_b0", "inv_b1", "inv_c0",  "inv_c1",
        "xq_lq_quad0", "xq_lq_formula0", "xq_lq_quad1", "xq_lq_formula1",
        "xq_scaling0", "xq_scaling1", "xq_sub_quad", "xq_sub_exact",
        "status"};

    InnerCorrectors::instance();
    std::vector<std::vector<Cell>> rows(grid.size());
    std::atomic<std::size_t> failed{0};

    parallel_for(grid.size(), cfg.jobs, [&](std::size_t i) {
        const double nu = grid[i];
        try {
            FunctionalEngine eng(make_context(cfg, nu));
            const StatePair sa = canonical_state_a();
            const StatePair sb = canonical_state_b();
            const StatePair sc = canonical_state_c();
            const CrosscheckResult x0 = eng.closed_form_crosschecks(0);
            const CrosscheckResult x1 = eng.closed_form_crosschecks(1);
            rows[i] = {Cell(nu),
                       Cell(eng.pair(0).lambda),
                       Cell(eng.pair(1).lambda),
                       Cell(eng.ell_eigen(0, 0)),
                       Cell(eng.ell_eigen(1, 0)),
                       Cell(eng.ell_eigen(0, 1)),
                       Cell(eng.ell_eigen(1, 1)),
                       Cell(eng.frkb(0)),
                       Cell(eng.frkb(1)),
                       Cell(eng.frkc(0)),
                       Cell(eng.frkc(1)),
                       Cell(eng.invariance(0, sa)),
                       Cell(eng.invariance(1, sa)),
                       Cell(eng.invariance(0, sb)),
                       Cell(eng.invariance(1, sb)),
                       Cell(eng.invariance(0, sc)),
                       Cell(eng.invariance(1, sc)),
                       Cell(x0.quad_lambda_q),
                       Cell(x0.formula_lambda_q),
                       Cell(x1.quad_lambda_q),
                       Cell(x1.formula_lambda_q),
                       Cell(x0.quad_scaling),
                       Cell(x1.quad_scaling),
                       Cell(x0.sub_integral),
                       Cell(x0.sub_integral_exact),
                       Cell("ok")};
        } catch (const std::exception& e) {
            failed.fetch_add(1);
            std::vector<Cell> row(26);
            row[0] = Cell(nu);
            row[25] = Cell(std::string("failed: ") + e.what());
            rows[i] = std::move(row);
        }
    });

    for (auto& r : rows) res.table.add_row(std::move(r));
    res.failed_rows = failed.load();
    return res;
}

SweepResult run_modulation(const RunConfig& cfg) {
    SweepResult res;
    res.table.columns = {"stage", "tau", "nu", "b", "beta_log_nu",
                         "c_est", "mu2_diag"};

    const double shoot_end = std::min(cfg.tau_end, 1e5);
    ShootOptions sopt;
    const Trajectory traj =
        shoot_stable_manifold(cfg.nu_min, cfg.tau0, shoot_end, sopt);

    for (const auto& s : traj.samples)
        res.table.add_row({Cell("manifold"), Cell(s.tau), Cell(s.nu),
                           Cell(s.b), Cell(s.beta_log_nu), Cell(s.c_est),
                           Cell(s.mu2_diag)});

    // manifold-matched start for the sharp equation: the sample nearest
    // one tenth of the shooting horizon
    const double tau1_target = shoot_end / 10.0;
    const RateSample* start = &traj.samples.front();
    for (const auto& s : traj.samples)
        if (std::fabs(std::log(s.tau / tau1_target)) <
            std::fabs(std::log(start->tau / tau1_target)))
            start = &s;

    const auto sharp = sharp_b_integrate(start->b, start->tau, cfg.tau_end);
    for (const auto& s : sharp)
        res.table.add_row({Cell("sharp"), Cell(s.tau), Cell(), Cell(s.b),
                           Cell(), Cell(s.c_est), Cell(s.mu2_diag)});

    const RateSample& last = sharp.back();
    std::ostringstream sum;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", last.c_est);
    sum << "modulation summary: c_est(tau=" << format_double(last.tau)
        << ") = " << buf << "; universal constant 2/e = 0.7358"
        << "; earlier numerical-simulation value 0.382"
        << "; ratio (2/e)/0.382 = 1.9261"
        << "; mu2 diagnostic = " << format_double(last.mu2_diag)
        << "; beta*|log nu| tail = " << format_double(traj.samples.back().beta_log_nu);
    res.summary = sum.str();
    return res;
}

SweepResult run_rate(const RunConfig& cfg) {
    (void)cfg;
    SweepResult res;
    res.table.columns = {"T_minus_t", "lambda", "prefactor_ratio"};
    for (int k = 2; k <= 9; k++) {
        const double gap = std::pow(10.0, -k);
        const double lam = predicted_rate(0.0, gap);
        const double ratio = lam / (gap * std::exp(-std::sqrt(-std::log(gap))));
        res.table.add_row({Cell(gap), Cell(lam), Cell(ratio)});
    }
    std::ostringstream sum;
    sum << "rate summary: prefactor 2/e = 0.7358"
        << "; earlier numerical-simulation value 0.382"
        << "; ratio (2/e)/0.382 = 1.9261";
    res.summary = sum.str();
    return res;
}

namespace {

int emit_one(const SweepResult& r, const RunConfig& cfg,
             const std::string& path, std::ostream& info) {
    emit_report(r.table, cfg.format, path);
    if (!r.summary.empty()) info << r.summary << "\n";
    if (!r.table.rows.empty() && r.failed_rows == r.table.rows.size()) return 2;
    return 0;
}

} // namespace

int run_command(const RunConfig& cfg, std::ostream& info) {
    cfg.validate();
    switch (cfg.command) {
        case Command::eigen:
            return emit_one(run_eigen_sweep(cfg), cfg, cfg.out, info);
        case Command::functionals:
            return emit_one(run_functionals(cfg), cfg, cfg.out, info);
        case Command::modulation:
            return emit_one(run_modulation(cfg), cfg, cfg.out, info);
        case Command::rate:
            return emit_one(run_rate(cfg), cfg, cfg.out, info);
        case Command::all: {
            int rc = 0;
            const std::string ext = "." + cfg.format;
            rc = std::max(rc, emit_one(run_eigen_sweep(cfg), cfg,
                                       cfg.out + "_eigen" + ext, info));
            rc = std::max(rc, emit_one(run_functionals(cfg), cfg,
                                       cfg.out + "_functionals" + ext, info));
            rc = std::max(rc, emit_one(run_modulation(cfg), cfg,
                                       cfg.out + "_modulation" + ext, info));
            rc = std::max(rc, emit_one(run_rate(cfg), cfg,
                                       cfg.out + "_rate" + ext, info));
            return rc;
        }
    }
    return 0;
}

} // namespace wmb
