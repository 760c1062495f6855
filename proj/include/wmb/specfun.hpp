// Special functions shared by every other module: log-gamma, digamma,
// Pochhammer symbols, the Gauss hypergeometric series, and the logarithmic
// connection expansion of the smooth hypergeometric solution near the
// light cone.
//
// Everything here is pure and reentrant; no external special-function
// library is used.

#ifndef WMB_SPECFUN_HPP
#define WMB_SPECFUN_HPP

#include <cstddef>

namespace wmb {

// Euler-Mascheroni constant, to double precision.
inline constexpr double euler_gamma = 0.5772156649015329;

/// Parameters of the Gauss hypergeometric series F(a,b;c;z).
/// c must not be zero or a negative integer; the raw series is only
/// evaluated for |z| bounded away from 1 (callers enforce |z| <= 0.9).
struct HypParams {
    double a;
    double b;
    double c;
    double z;
};

/// Coefficient pair (c_n, d_n) of the logarithmic connection expansion.
/// c_0 = 1 for every lambda.
struct ConnectionCoeffs {
    std::size_t n;
    double c_n;
    double d_n;
};

// log Gamma(x) for x > 0, Lanczos approximation, |rel err| ~ 1e-15.
double log_gamma(double x);

// psi(x) = Gamma'(x)/Gamma(x) for x > 0.  Recurrence shift to x >= 8
// followed by the asymptotic series; relative error <= 1e-13.
// Throws std::domain_error for x <= 0.
double digamma(double x);

// psi'(x) for x > 0 (same shift + series scheme).
double trigamma(double x);

// Pochhammer symbol (z)_n = z (z+1) ... (z+n-1), (z)_0 = 1.
double pochhammer(double z, std::size_t n);

// Gauss hypergeometric series.  Terms are summed until three consecutive
// terms fall below 1e-16 of the partial sum; throws std::runtime_error if
// 10^6 terms are exceeded and std::domain_error if c is a non-positive
// integer.
double gauss_2f1(const HypParams& p);

// n-th z-derivative of F(a,b;c;z) via the contiguous parameter shift.
double gauss_2f1_dz(const HypParams& p, int order);

// Generalized series 3F2(a1,a2,a3; b1,b2; z) with the same termination
// rules as gauss_2f1; needed for the factorized form (F(a,b;c;z)-1) =
// (ab/c) z 3F2(a+1,b+1,1; c+1,2; z) that keeps removable singularities
// exact.
double hyp_3f2(double a1, double a2, double a3, double b1, double b2,
               double z);

// h1(lambda; z) = F(lambda/2, (lambda-1)/2; lambda+1/2; z), the solution of
// the light-cone hypergeometric equation that is smooth at z = 0 with
// h1(lambda;0) = 1.  Rejects |z| > 0.92 (callers should stay at |z| <= 0.9;
// values nearer z = 1 belong to h1_near_origin) and requires lambda in one
// of the two admissible windows |lambda| <= 0.5 or |lambda-1| <= 0.5.
double h1(double lambda, double z);

// z-derivative of h1.
double h1_dz(double lambda, double z, int order = 1);

// Connection coefficients of the expansion of h1 around z = 1:
//   c_n = (lambda/2+1)_n ((lambda+1)/2)_n / (n! (n+1)!)
//   d_n = -psi(n+1) - psi(n+2) + psi(lambda/2+1+n) + psi((lambda+1)/2+n)
ConnectionCoeffs connection_coeffs(double lambda, std::size_t n);

// (1/rho) h1(lambda; 1-rho^2) evaluated through the connection expansion
//   G * { 2/rho + lambda(lambda-1) rho sum_n c_n rho^{2n} [log rho + d_n/2] }
// with G = Gamma(lambda+1/2) / (2 Gamma(lambda/2+1) Gamma((lambda+1)/2)).
// The series is truncated adaptively; max_terms caps the truncation index
// and a std::runtime_error reports an unreachable tail.
double h1_near_origin(double lambda, double rho, std::size_t max_terms = 200);

// Connection coefficient c_conn(lambda) = 2 Gamma(lambda/2+1)
// Gamma((lambda+1)/2) / Gamma(lambda+1/2); equals 2 at lambda = 0, 1.
double c_conn(double lambda);

// d/dlambda of log c_conn (used for the removable-singularity limits).
double c_conn_log_deriv(double lambda);

// True if lambda lies in one of the two admissible spectral windows.
bool lambda_admissible(double lambda);

} // namespace wmb

#endif
