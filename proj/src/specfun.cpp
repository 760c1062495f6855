#include "wmb/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace wmb {

bool lambda_admissible(double lambda) {
    return std::fabs(lambda) <= 0.5 || std::fabs(lambda - 1.0) <= 0.5;
}

static void require_admissible(double lambda, const char* who) {
    if (!lambda_admissible(lambda))
        throw std::domain_error(std::string(who) + ": lambda=" +
                                std::to_string(lambda) +
                                " outside the admissible windows");
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma: x <= 0");
    // Lanczos, g = 7, n = 9 (Godfrey coefficients).
    static const double coef[9] = {
        0.99999999999980993,  676.5203681218851,    -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,  12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection; only hit for 0 < x < 1/2
        return std::log(M_PI / std::sin(M_PI * x)) - log_gamma(1.0 - x);
    }
    double xx = x - 1.0;
    double a = coef[0];
    double t = xx + 7.5;
    for (int i = 1; i < 9; i++) a += coef[i] / (xx + i);
    return 0.5 * std::log(2.0 * M_PI) + (xx + 0.5) * std::log(t) - t + std::log(a);
}

double digamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("digamma: x <= 0");
    double acc = 0.0;
    while (x < 8.0) {   // psi(x) = psi(x+1) - 1/x
        acc -= 1.0 / x;
        x += 1.0;
    }
    // asymptotic series, |x| >= 8: psi(x) ~ ln x - 1/(2x) - sum B_2n/(2n x^2n)
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = std::log(x) - 0.5 * inv;
    s -= inv2 * (1.0 / 12.0 - inv2 * (1.0 / 120.0 - inv2 * (1.0 / 252.0 -
         inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0))))));
    return s + acc;
}

double trigamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("trigamma: x <= 0");
    double acc = 0.0;
    while (x < 8.0) {   // psi'(x) = psi'(x+1) + 1/x^2
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    const double inv = 1.0 / x, inv2 = inv * inv;
    double s = inv * (1.0 + 0.5 * inv);
    s += inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 -
         inv2 * (1.0 / 30.0 - inv2 * (5.0 / 66.0)))));
    return s + acc;
}

double pochhammer(double z, std::size_t n) {
    double p = 1.0;
    for (std::size_t k = 0; k < n; k++) p *= z + static_cast<double>(k);
    return p;
}

double gauss_2f1(const HypParams& p) {
    const double c_round = std::round(p.c);
    if (p.c <= 0.0 && std::fabs(p.c - c_round) < 1e-14)
        throw std::domain_error("gauss_2f1: c is zero or a negative integer");

    double term = 1.0, sum = 1.0;
    int below = 0;
    for (std::size_t n = 0; n < 1000000; n++) {
        const double dn = static_cast<double>(n);
        term *= (p.a + dn) * (p.b + dn) / ((p.c + dn) * (dn + 1.0)) * p.z;
        sum += term;
        if (std::fabs(term) < 1e-16 * std::fabs(sum)) {
            if (++below >= 3) return sum;
        } else {
            below = 0;
        }
    }
    throw std::runtime_error("gauss_2f1: series did not converge in 1e6 terms");
}

double hyp_3f2(double a1, double a2, double a3, double b1, double b2,
               double z) {
    for (double b : {b1, b2}) {
        if (b <= 0.0 && std::fabs(b - std::round(b)) < 1e-14)
            throw std::domain_error("hyp_3f2: lower parameter is a non-positive integer");
    }
    double term = 1.0, sum = 1.0;
    int below = 0;
    for (std::size_t n = 0; n < 1000000; n++) {
        const double dn = static_cast<double>(n);
        term *= (a1 + dn) * (a2 + dn) * (a3 + dn) /
                ((b1 + dn) * (b2 + dn) * (dn + 1.0)) * z;
        sum += term;
        if (std::fabs(term) < 1e-16 * std::fabs(sum)) {
            if (++below >= 3) return sum;
        } else {
            below = 0;
        }
    }
    throw std::runtime_error("hyp_3f2: series did not converge in 1e6 terms");
}

double gauss_2f1_dz(const HypParams& p, int order) {
    // F'(a,b;c;z) = (ab/c) F(a+1,b+1;c+1;z), applied `order` times.
    double factor = 1.0;
    HypParams q = p;
    for (int k = 0; k < order; k++) {
        factor *= q.a * q.b / q.c;
        q.a += 1.0;
        q.b += 1.0;
        q.c += 1.0;
    }
    return factor * gauss_2f1(q);
}

double h1(double lambda, double z) {
    require_admissible(lambda, "h1");
    if (std::fabs(z) > 0.92)
        throw std::domain_error("h1: |z| > 0.92; use the connection expansion");
    return gauss_2f1({0.5 * lambda, 0.5 * (lambda - 1.0), lambda + 0.5, z});
}

double h1_dz(double lambda, double z, int order) {
    require_admissible(lambda, "h1_dz");
    if (std::fabs(z) > 0.92)
        throw std::domain_error("h1_dz: |z| > 0.92");
    return gauss_2f1_dz({0.5 * lambda, 0.5 * (lambda - 1.0), lambda + 0.5, z}, order);
}

ConnectionCoeffs connection_coeffs(double lambda, std::size_t n) {
    const double dn = static_cast<double>(n);
    const double c_n = pochhammer(0.5 * lambda + 1.0, n) *
                       pochhammer(0.5 * (lambda + 1.0), n) /
                       (std::exp(log_gamma(dn + 1.0) + log_gamma(dn + 2.0)));
    const double d_n = -digamma(dn + 1.0) - digamma(dn + 2.0) +
                       digamma(0.5 * lambda + 1.0 + dn) +
                       digamma(0.5 * (lambda + 1.0) + dn);
    return {n, c_n, d_n};
}

double h1_near_origin(double lambda, double rho, std::size_t max_terms) {
    require_admissible(lambda, "h1_near_origin");
    if (!(rho > 0.0) || rho > 0.7 * (1.0 + 1e-12))
        throw std::domain_error("h1_near_origin: rho must lie in (0, 0.7]");

    const double gamma_ratio =
        std::exp(log_gamma(lambda + 0.5) - log_gamma(0.5 * lambda + 1.0) -
                 log_gamma(0.5 * (lambda + 1.0))) / 2.0;

    const double log_rho = std::log(rho);
    const double rho2 = rho * rho;
    double pw = 1.0;       // rho^{2n}
    double series = 0.0;
    bool converged = false;
    for (std::size_t n = 0; n < max_terms; n++) {
        const ConnectionCoeffs cd = connection_coeffs(lambda, n);
        const double term = cd.c_n * pw * (log_rho + 0.5 * cd.d_n);
        series += term;
        pw *= rho2;
        // tail bound: c_n decays like n^{lambda-3/2}, so the next term
        // is no larger than |c_n| pw (|log rho| + |d_n|/2 + 1)
        const double bound = std::fabs(cd.c_n) * pw *
                             (std::fabs(log_rho) + 0.5 * std::fabs(cd.d_n) + 1.0);
        if (bound < 1e-14 * (1.0 + std::fabs(series))) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw std::runtime_error("h1_near_origin: tail tolerance unreachable");

    return gamma_ratio * (2.0 / rho + lambda * (lambda - 1.0) * rho * series);
}

double c_conn(double lambda) {
    require_admissible(lambda, "c_conn");
    return 2.0 * std::exp(log_gamma(0.5 * lambda + 1.0) +
                          log_gamma(0.5 * (lambda + 1.0)) -
                          log_gamma(lambda + 0.5));
}

double c_conn_log_deriv(double lambda) {
    require_admissible(lambda, "c_conn_log_deriv");
    return 0.5 * digamma(0.5 * lambda + 1.0) +
           0.5 * digamma(0.5 * (lambda + 1.0)) - digamma(lambda + 0.5);
}

} // namespace wmb
