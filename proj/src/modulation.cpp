#include "wmb/modulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "wmb/ode.hpp"

namespace wmb {

double ModulationState::nu() const { return std::exp(log_nu); }
double ModulationState::b() const { return std::exp(log_b); }
double ModulationState::beta() const { return std::expm1(log_b - log_nu); }
double ModulationState::mu() const { return -log_b; }
double ModulationState::log_nu_abs() const { return -log_nu; }

namespace {

constexpr double nu1 = 1.0 / 3.0;
constexpr double b_m1 = 0.5;
constexpr double b_1 = 0.5;
const double b_2 = 5.0 / 12.0 - 0.5 * std::log(2.0);

// rhs in the log variables u = [log nu, log b]
void log_rhs(const double* u, double* du) {
    const double L = -u[0];
    const double beta = std::expm1(u[1] - u[0]);
    du[0] = -(beta + nu1 / L);
    du[1] = -(beta * b_m1 / L + b_1 / L + b_2 / (L * L));
}

RateSample manifold_sample(const ModulationState& s) {
    RateSample r;
    r.tau = s.tau;
    r.b = s.b();
    r.nu = s.nu();
    r.has_nu = true;
    r.c_est = std::exp(std::sqrt(s.tau) + s.log_b);
    const double mu = s.mu();
    r.mu2_diag = mu * mu - s.tau -
                 2.0 * (1.0 - std::log(2.0)) * std::sqrt(s.tau);
    r.beta_log_nu = s.beta() * s.log_nu_abs();
    return r;
}

} // namespace

SystemDerivatives system_rhs(const ModulationState& s) {
    double du[2];
    const double u[2] = {s.log_nu, s.log_b};
    log_rhs(u, du);
    return {s.nu() * du[0], s.b() * du[1]};
}

namespace {

enum class Escape { down = -1, none = 0, up = 1 };

struct ProbeResult {
    Escape escape;
    double tau_exit;
};

// integrate from (tau_s, log_nu_s) with ratio offset beta until |beta| > 1/2
// or tau_probe is reached
ProbeResult probe(double tau_s, double log_nu_s, double beta, double tau_probe,
                  double ode_tol) {
    double u[2] = {log_nu_s, log_nu_s + std::log1p(beta)};
    OdeOptions opt;
    opt.rel_tol = ode_tol;
    opt.abs_tol = 1e-12;
    opt.max_step = 5.0;
    Dop853 solver(2, [](double, const double* y, double* dy) { log_rhs(y, dy); },
                  opt);
    ProbeResult res{Escape::none, tau_probe};
    try {
        solver.integrate(tau_s, tau_probe, u, {},
                         [&](double tau, const double* y) {
                             const double bt = std::expm1(y[1] - y[0]);
                             if (std::fabs(bt) > 0.5) {
                                 res.escape = bt > 0 ? Escape::up : Escape::down;
                                 res.tau_exit = tau;
                                 return false;
                             }
                             return true;
                         });
    } catch (const std::exception&) {
        // step failure deep off-manifold counts as an escape in the current
        // drift direction
        const double bt = std::expm1(u[1] - u[0]);
        res.escape = bt > 0 ? Escape::up : Escape::down;
    }
    return res;
}

// bisect the ratio at (tau_s, log_nu_s) so the trajectory survives to
// tau_probe; bracket [lo, hi] must escape down/up respectively
struct BisectResult {
    double beta;
    double width;
};

BisectResult bisect_stage(double tau_s, double log_nu_s, double lo, double hi,
                          double tau_probe, const ShootOptions& opt) {
    Escape e_lo = probe(tau_s, log_nu_s, lo, tau_probe, opt.ode_tol).escape;
    Escape e_hi = probe(tau_s, log_nu_s, hi, tau_probe, opt.ode_tol).escape;

    // widen until the endpoints classify oppositely
    for (int k = 0; k < 60 && !(e_lo == Escape::down && e_hi == Escape::up);
         k++) {
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        lo = std::max(-0.5, mid - 3.0 * half);
        hi = std::min(0.5, mid + 3.0 * half);
        e_lo = probe(tau_s, log_nu_s, lo, tau_probe, opt.ode_tol).escape;
        e_hi = probe(tau_s, log_nu_s, hi, tau_probe, opt.ode_tol).escape;
        if (lo == -0.5 && hi == 0.5) break;
    }
    if (e_lo == Escape::none) return {lo, hi - lo};
    if (e_hi == Escape::none) return {hi, hi - lo};
    if (!(e_lo == Escape::down && e_hi == Escape::up))
        throw ShootingFailure(
            "shoot_stable_manifold: bracket endpoints escape the same way "
            "(tau=" + std::to_string(tau_s) +
            ", beta in [" + std::to_string(lo) + ", " + std::to_string(hi) + "])");

    while (hi - lo > opt.bisect_width) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;   // double resolution reached
        const ProbeResult pr = probe(tau_s, log_nu_s, mid, tau_probe, opt.ode_tol);
        if (pr.escape == Escape::none) return {mid, hi - lo};
        (pr.escape == Escape::up ? hi : lo) = mid;
    }
    return {0.5 * (lo + hi), hi - lo};
}

} // namespace

Trajectory shoot_stable_manifold(double nu0, double tau0, double tau_end,
                                 const ShootOptions& opt) {
    if (!(nu0 > 0.0) || nu0 >= 1e-3)
        throw std::domain_error("shoot_stable_manifold: nu0 must lie in (0, 1e-3)");
    if (tau0 < 25.0)
        throw std::domain_error("shoot_stable_manifold: tau0 must be >= 25");
    if (!(tau_end > tau0) || tau_end > 1e6)
        throw std::domain_error("shoot_stable_manifold: tau_end out of range");

    // log-uniform sample times
    std::vector<double> sample_tau(opt.samples);
    const double lt0 = std::log(tau0), lt1 = std::log(tau_end);
    for (int i = 0; i < opt.samples; i++)
        sample_tau[i] = std::exp(lt0 + (lt1 - lt0) * (i + 1.0) / opt.samples);

    Trajectory out;
    ModulationState cur;
    cur.tau = tau0;
    cur.log_nu = std::log(nu0);

    bool first_stage = true;
    double beta_guess = 0.0, bracket_half = 0.5;
    std::size_t next_sample = 0;

    out.samples.push_back(RateSample{});   // placeholder for the start point

    while (cur.tau < tau_end) {
        const double stage_end = std::min(cur.tau + opt.advance, tau_end);
        const double tau_probe = std::min(stage_end + opt.probe_margin, 1e6 + opt.probe_margin);

        const double lo = std::max(-0.5, beta_guess - bracket_half);
        const double hi = std::min(0.5, beta_guess + bracket_half);
        const BisectResult bis =
            bisect_stage(cur.tau, cur.log_nu, lo, hi, tau_probe, opt);
        if (first_stage) {
            out.beta0 = bis.beta;
            out.bisect_width = bis.width;
            first_stage = false;
        }

        // advance the accepted midpoint trajectory to stage_end, recording
        // the sample times that fall inside this stage
        double u[2] = {cur.log_nu, cur.log_nu + std::log1p(bis.beta)};
        std::vector<double> outputs;
        while (next_sample < sample_tau.size() &&
               sample_tau[next_sample] <= stage_end) {
            if (sample_tau[next_sample] > cur.tau)
                outputs.push_back(sample_tau[next_sample]);
            next_sample++;
        }
        if (outputs.empty() || outputs.back() < stage_end)
            outputs.push_back(stage_end);

        OdeOptions oopt;
        oopt.rel_tol = opt.ode_tol;
        oopt.abs_tol = 1e-12;
        oopt.max_step = 5.0;
        Dop853 solver(2, [](double, const double* y, double* dy) { log_rhs(y, dy); },
                      oopt);
        solver.integrate(cur.tau, stage_end, u, outputs,
                         [&](double tau, const double* y) {
                             ModulationState s;
                             s.tau = tau;
                             s.log_nu = y[0];
                             s.log_b = y[1];
                             if (tau < stage_end)
                                 out.samples.push_back(manifold_sample(s));
                             return true;
                         });

        cur.tau = stage_end;
        cur.log_nu = u[0];
        cur.log_b = u[1];
        beta_guess = cur.beta();
        // the stage amplifies the bisection width by at most e^{advance}
        bracket_half = std::max(1e-10,
                                10.0 * bis.width * std::exp(opt.advance));
    }

    out.samples.front() = [&] {
        ModulationState s0;
        s0.tau = tau0;
        s0.log_nu = std::log(nu0);
        s0.log_b = s0.log_nu + std::log1p(out.beta0);
        return manifold_sample(s0);
    }();
    out.samples.push_back(manifold_sample(cur));
    out.final_state = cur;
    return out;
}

std::vector<RateSample> sharp_b_integrate(double b0, double tau0,
                                          double tau_end,
                                          const SharpOptions& opt) {
    const double mu0 = -std::log(b0);
    if (!(mu0 >= 5.0))
        throw std::domain_error("sharp_b_integrate: -log b0 must be >= 5");
    if (!(tau_end > tau0) || !(tau0 > 0.0))
        throw std::domain_error("sharp_b_integrate: bad tau range");

    const double one_minus_log2 = 1.0 - std::log(2.0);
    // mu = -log b in s = sqrt(tau):  dmu/ds = s/mu + s (1 - log 2)/mu^2
    auto rhs = [one_minus_log2](double s, const double* u, double* du) {
        du[0] = s / u[0] + s * one_minus_log2 / (u[0] * u[0]);
    };

    const double s0 = std::sqrt(tau0), s1 = std::sqrt(tau_end);
    std::vector<double> s_out(opt.samples);
    const double lt0 = std::log(tau0), lt1 = std::log(tau_end);
    for (int i = 0; i < opt.samples; i++)
        s_out[i] = std::sqrt(std::exp(lt0 + (lt1 - lt0) * (i + 1.0) / opt.samples));

    std::vector<RateSample> rows;
    rows.reserve(opt.samples + 1);
    auto push = [&](double s, double mu) {
        RateSample r;
        r.tau = s * s;
        r.b = std::exp(-mu);
        r.has_nu = false;
        r.c_est = std::exp(s - mu);
        r.mu2_diag = mu * mu - s * s - 2.0 * one_minus_log2 * s;
        rows.push_back(r);
    };

    double u[1] = {mu0};
    push(s0, mu0);
    OdeOptions oopt;
    oopt.rel_tol = opt.ode_tol;
    oopt.abs_tol = 1e-12;
    Dop853 solver(1, rhs, oopt);
    solver.integrate(s0, s1, u, s_out,
                     [&](double s, const double* y) {
                         push(s, y[0]);
                         return true;
                     });
    return rows;
}

double predicted_rate(double t, double blow_up_time) {
    const double gap = blow_up_time - t;
    if (!(gap > 0.0) || !(gap < std::exp(-1.0)))
        throw std::domain_error("predicted_rate: need 0 < T - t < 1/e");
    return rate_prefactor * gap * std::exp(-std::sqrt(-std::log(gap)));
}

} // namespace wmb
