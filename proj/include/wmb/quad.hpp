// Quadrature utilities: adaptive Gauss-Kronrod 15(7) on finite panels and
// a tanh-sinh rule for integrands with an endpoint singularity at the
// right end of the interval.

#ifndef WMB_QUAD_HPP
#define WMB_QUAD_HPP

#include <array>
#include <functional>

namespace wmb {

// Adaptive GK15 of f over [a,b]; bisects until the Kronrod-Gauss error
// estimate of every panel is below abs_tol + rel_tol*|integral|.
// Throws std::runtime_error if the panel budget is exhausted.
double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol = 1e-12, double rel_tol = 1e-12,
                    int max_depth = 48);

// Same driver for a small vector of integrands sharing evaluation points.
template <std::size_t N>
using VecIntegrand = std::function<std::array<double, N>(double)>;
std::array<double, 6> integrate_gk6(const VecIntegrand<6>& f, double a,
                                    double b, double abs_tol, double rel_tol);

// Tanh-sinh quadrature of f over [a,b].  The integrand receives the node x
// and the distance b-x computed without cancellation, so weights like
// (1-x)^alpha can be formed accurately near x = b.  Level doubling stops
// when successive refinements agree to abs_tol + rel_tol*|integral|.
double integrate_tanh_sinh(
    const std::function<double(double, double)>& f, double a, double b,
    double abs_tol = 1e-12, double rel_tol = 1e-12, int max_level = 12);

} // namespace wmb

#endif
