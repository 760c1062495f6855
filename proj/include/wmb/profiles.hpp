// Soliton profiles and the inner correction machinery: the ground state and
// its scaling derivatives, the fundamental system (J1, J2) of the linearized
// operator, the formal right inverse H^{-1}, the corrector profiles
// T1, S1, U1 on a cached log grid, and the light-cone correction U_infty.

#ifndef WMB_PROFILES_HPP
#define WMB_PROFILES_HPP

#include <array>
#include <cmath>
#include <functional>
#include <vector>

#include "wmb/radial.hpp"

namespace wmb {

// --- closed-form soliton quantities, inner variable y > 0 ---------------
namespace soliton {

inline double q(double y) { return 2.0 * std::atan(y); }

// Lambda Q = 2y/(1+y^2), the kernel element of H
inline double lambda_q(double y) { return 2.0 * y / (1.0 + y * y); }
inline double dlambda_q(double y) {
    const double s = 1.0 + y * y;
    return 2.0 * (1.0 - y * y) / (s * s);
}
inline double d2lambda_q(double y) {
    const double s = 1.0 + y * y;
    return 4.0 * y * (y * y - 3.0) / (s * s * s);
}

// Lambda_0 Lambda Q = (y d/dy + 1) Lambda Q = 4y/(1+y^2)^2
inline double lambda0_lambda_q(double y) {
    const double s = 1.0 + y * y;
    return 4.0 * y / (s * s);
}
inline double dlambda0_lambda_q(double y) {
    const double s = 1.0 + y * y;
    return 4.0 * (1.0 - 3.0 * y * y) / (s * s * s);
}

// Lambda_0 Lambda_0 Lambda Q = 8y(1-y^2)/(1+y^2)^3
inline double lambda0_lambda0_lambda_q(double y) {
    const double s = 1.0 + y * y;
    return 8.0 * y * (1.0 - y * y) / (s * s * s);
}

// V = cos(2Q) = 1 - 8y^2/(1+y^2)^2
inline double potential_v(double y) {
    const double s = 1.0 + y * y;
    return 1.0 - 8.0 * y * y / (s * s);
}

// conjugate potential 4/(1+y^2)
inline double potential_v_tilde(double y) { return 4.0 / (1.0 + y * y); }

// V_nu(rho) = 1 - 8 nu^2 rho^2 / (nu^2 + rho^2)^2, self-similar variable
inline double potential_v_nu(double nu, double rho) {
    const double s = nu * nu + rho * rho;
    return 1.0 - 8.0 * nu * nu * rho * rho / (s * s);
}

} // namespace soliton

// J1 = Lambda Q and J2 = Lambda Q * int_1^y dy'/(y' (Lambda Q)^2); the
// integral has the closed-form antiderivative y^2/8 + (log y)/2 - 1/(8y^2).
inline double j1(double y) { return soliton::lambda_q(y); }
inline double dj1(double y) { return soliton::dlambda_q(y); }
FieldSample j2(double y);

// (H^{-1} f)(y) = J1 int_0^y f J2 y' dy' - J2 int_0^y f J1 y' dy' by
// adaptive panel quadrature (absolute tolerance per panel).
double apply_hinv(const std::function<double(double)>& f, double y,
                  double abs_tol = 1e-12);

struct ProfileSamples {
    FieldSample t1, s1, u1;
};

/// T1 = -H^{-1} Lambda_0 Lambda_0 Lambda Q, S1 = -H^{-1} Lambda_0 Lambda Q,
/// U1 = -H^{-1} Lambda Q, tabulated once per process on a log grid over
/// y in [1e-6, 1e7] and interpolated in between.  Outside the grid the
/// small-y cubic and large-y linear/logarithmic asymptotes are used.
class InnerCorrectors {
public:
    static const InnerCorrectors& instance();

    ProfileSamples eval(double y) const;
    FieldSample t1(double y) const { return eval(y).t1; }
    FieldSample s1(double y) const { return eval(y).s1; }
    FieldSample u1(double y) const { return eval(y).u1; }

    // direct quadrature at a single point, used to validate the tables
    static ProfileSamples direct(double y, double abs_tol = 1e-12);

    // stored node values for the debugging CSV dump: rows of (y, T1, S1, U1)
    std::vector<std::array<double, 4>> dump_nodes() const;

private:
    InnerCorrectors();
    HermiteTable t1_, s1_, u1_;
    double y_min_, y_max_;
};

// U_infty(lambda; rho) = rho sum_{n>=1} c_n rho^{2n} [log rho + d_n/2].
// The series branch is used for rho < 0.4 and the factorized hypergeometric
// form (exact at lambda = 0, 1) for rho >= 0.4; both are exposed for the
// overlap consistency check.
double u_infty(double lambda, double rho);
double u_infty_series(double lambda, double rho);
double u_infty_factorized(double lambda, double rho);

} // namespace wmb

#endif
