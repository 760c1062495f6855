// Adaptive Dormand-Prince 8(5,3) integrator for small first-order systems.
// The coefficients are Hairer's published DOP853 constants; the driver
// supports forced output points so solution tables can be recorded on a
// prescribed grid without interpolation.

#ifndef WMB_ODE_HPP
#define WMB_ODE_HPP

#include <array>
#include <functional>
#include <vector>

namespace wmb {

// Right-hand side f(t, y, dydt) for a system of dimension <= 4.
using OdeRhs = std::function<void(double, const double*, double*)>;

struct OdeOptions {
    double rel_tol = 1e-11;
    double abs_tol = 1e-13;
    double initial_step = 0.0;   // 0 -> automatic
    double max_step = 0.0;       // 0 -> |t1 - t0|
    std::size_t max_steps = 2000000;
};

// Callback invoked after every accepted step (and at forced output points)
// with (t, y).  Return false to stop the integration early.
using OdeObserver = std::function<bool(double, const double*)>;

class Dop853 {
public:
    Dop853(int dim, OdeRhs rhs, OdeOptions opt = {});

    // Integrate from (t0, y0) to t1.  If `outputs` is non-empty the solver
    // lands exactly on each requested time (must be monotone between t0 and
    // t1) and calls the observer there; otherwise the observer fires on
    // every accepted step.  y0 is updated in place with the final state.
    // Throws std::runtime_error on step-size underflow or step-count
    // overflow.
    void integrate(double t0, double t1, double* y,
                   const std::vector<double>& outputs = {},
                   const OdeObserver& observer = nullptr);

private:
    int n_;
    OdeRhs rhs_;
    OdeOptions opt_;
    std::array<double, 4> k_[12], yt_;

    void stages(double t, const double* y, double h, double* y8,
                double* err5, double* err3);
    double initial_step(double t0, const double* y, double dir,
                        double t_span) const;
};

} // namespace wmb

#endif
