// The reduced modulation dynamics: the (nu, b) system with its coupling
// constants, stable-manifold tracking of the exponentially unstable ratio
// b/nu - 1 by staged bisection shooting, integration of the sharp
// b-equation in the square-root time variable, and the predicted contraction
// rate with its universal prefactor 2/e.
//
// All state-dependent terms beyond the closed constants are deliberately
// absent: this module integrates the reduced parameter dynamics only.

#ifndef WMB_MODULATION_HPP
#define WMB_MODULATION_HPP

#include <stdexcept>
#include <vector>

namespace wmb {

/// Raised when bisection cannot bracket the stable manifold (both endpoints
/// escape the same way); carries the diagnostics in the message.
struct ShootingFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parameter state at self-similar time tau, stored in log variables so
/// deep scales never underflow.
struct ModulationState {
    double tau = 0.0;
    double log_nu = 0.0;
    double log_b = 0.0;

    double nu() const;
    double b() const;
    double beta() const;      // b/nu - 1
    double mu() const;        // -log b
    double log_nu_abs() const; // |log nu|
};

// (d nu / d tau, d b / d tau) of the reduced system
struct SystemDerivatives {
    double nu_tau;
    double b_tau;
};
SystemDerivatives system_rhs(const ModulationState& s);

struct RateSample {
    double tau = 0.0;
    double b = 0.0;
    double nu = 0.0;          // meaningful only when has_nu
    bool has_nu = false;
    double c_est = 0.0;       // b e^{sqrt tau}
    double mu2_diag = 0.0;    // mu^2 - tau - 2(1-log 2) sqrt(tau)
    double beta_log_nu = 0.0; // beta |log nu|, manifold rows only
};

struct ShootOptions {
    double ode_tol = 1e-10;
    double bisect_width = 1e-13;  // target width of each stage bisection
    double advance = 15.0;        // tau-units accepted per stage
    double probe_margin = 35.0;   // extra horizon used to classify escapes
    int samples = 400;            // log-uniform trajectory samples
};

struct Trajectory {
    std::vector<RateSample> samples;
    double beta0 = 0.0;            // bisected initial ratio offset
    double bisect_width = 0.0;     // width of the first-stage bracket
    ModulationState final_state;
};

// Locates the initial ratio beta0 = b0/nu0 - 1 in [-1/2, 1/2] whose forward
// trajectory keeps |beta| <= 1/2, then tracks the manifold to tau_end by
// re-bisecting the current ratio every `advance` tau-units (a single
// bisection cannot hold the unstable direction longer than ~38 tau-units in
// double precision).  Throws std::runtime_error with diagnostics when both
// bracket endpoints escape the same way.
Trajectory shoot_stable_manifold(double nu0, double tau0, double tau_end,
                                 const ShootOptions& opt = {});

struct SharpOptions {
    double ode_tol = 1e-12;
    int samples = 400;
};

// Integrates b_tau/b = -(1/2)/|log b| - (1/2 - log2/2)/|log b|^2 from
// (tau0, b0) to tau_end, stepping in s = sqrt(tau).  Requires -log b0 >= 5.
std::vector<RateSample> sharp_b_integrate(double b0, double tau0,
                                          double tau_end,
                                          const SharpOptions& opt = {});

// lambda(t) = (2/e) (T-t) exp(-sqrt(|log(T-t)|)); requires 0 < T-t < 1/e.
double predicted_rate(double t, double blow_up_time);

// universal prefactor and the earlier numerical-simulation value it is
// compared against
inline constexpr double rate_prefactor = 0.7357588823428847;   // 2/e
inline constexpr double comparison_prefactor = 0.382;

} // namespace wmb

#endif
