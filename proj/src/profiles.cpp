#include "wmb/profiles.hpp"

#include <cmath>
#include <stdexcept>

#include "wmb/quad.hpp"
#include "wmb/specfun.hpp"

namespace wmb {

// --- Hermite tables ------------------------------------------------------

FieldSample HermiteTable::eval_t(double t) const {
    const std::size_t n = v_.size();
    double s = (t - t0_) / dt_;
    if (s <= 0.0) s = 1e-12;
    if (s >= static_cast<double>(n - 1)) s = static_cast<double>(n - 1) - 1e-12;
    const std::size_t i = static_cast<std::size_t>(s);
    const double u = s - static_cast<double>(i);

    const double h00 = (1.0 + 2.0 * u) * (1.0 - u) * (1.0 - u);
    const double h10 = u * (1.0 - u) * (1.0 - u);
    const double h01 = u * u * (3.0 - 2.0 * u);
    const double h11 = u * u * (u - 1.0);

    const double v = h00 * v_[i] + h01 * v_[i + 1] +
                     dt_ * (h10 * g_[i] + h11 * g_[i + 1]);

    const double d00 = 6.0 * u * (u - 1.0);
    const double d10 = (3.0 * u - 1.0) * (u - 1.0);
    const double d01 = -d00;
    const double d11 = u * (3.0 * u - 2.0);
    const double dv = (d00 * v_[i] + d01 * v_[i + 1]) / dt_ +
                      d10 * g_[i] + d11 * g_[i + 1];
    return {v, dv};
}

FieldSample LogGridField::eval(double r) const {
    if (!(r > 0.0)) throw std::domain_error("LogGridField: r <= 0");
    const FieldSample s = table_.eval_t(std::log(r));
    return {s.value, s.deriv / r};   // d/dr = (1/r) d/dt
}

// --- fundamental system ---------------------------------------------------

// antiderivative of (1+y^2)^2/(4y^3) = y^2/8 + (log y)/2 - 1/(8 y^2),
// written via t = log y to stay accurate near y = 1 where it vanishes
static double j2_integral(double y) {
    const double t = std::log(y);
    return std::expm1(4.0 * t) / (8.0 * std::exp(2.0 * t)) + 0.5 * t;
}

FieldSample j2(double y) {
    if (!(y > 0.0)) throw std::domain_error("j2: y <= 0");
    const double g = j2_integral(y);
    const double dg = 0.25 * std::pow(1.0 + y * y, 2) / (y * y * y);
    return {j1(y) * g, dj1(y) * g + j1(y) * dg};
}

// --- right inverse --------------------------------------------------------

double apply_hinv(const std::function<double(double)>& f, double y,
                  double abs_tol) {
    if (!(y > 0.0)) throw std::domain_error("apply_hinv: y <= 0");
    auto i1 = [&](double s) { return f(s) * j2(s).value * s; };
    auto i2 = [&](double s) { return f(s) * j1(s) * s; };
    const double a = integrate_gk(i1, 0.0, y, abs_tol, 1e-13);
    const double b = integrate_gk(i2, 0.0, y, abs_tol, 1e-13);
    return j1(y) * a - j2(y).value * b;
}

// --- corrector tables -----------------------------------------------------

namespace {
constexpr int profile_nodes = 2000;
constexpr double profile_y_min = 1e-6;
constexpr double profile_y_max = 1e7;
} // namespace

InnerCorrectors::InnerCorrectors() {
    const double t0 = std::log(profile_y_min);
    const double t1 = std::log(profile_y_max);
    const double dt = (t1 - t0) / (profile_nodes - 1);
    y_min_ = profile_y_min;
    y_max_ = profile_y_max;

    // running integrals I1 = int f J2 y dy, I2 = int f J1 y dy for the three
    // sources fT = Lmb0 Lmb0 LmbQ, fS = Lmb0 LmbQ, fU = LmbQ
    auto integrand = [](double s) -> std::array<double, 6> {
        const double w1 = j2(s).value * s, w2 = j1(s) * s;
        const double ft = soliton::lambda0_lambda0_lambda_q(s);
        const double fs = soliton::lambda0_lambda_q(s);
        const double fu = soliton::lambda_q(s);
        return {ft * w1, ft * w2, fs * w1, fs * w2, fu * w1, fu * w2};
    };

    std::array<double, 6> acc{};
    std::vector<double> v_t(profile_nodes), g_t(profile_nodes);
    std::vector<double> v_s(profile_nodes), g_s(profile_nodes);
    std::vector<double> v_u(profile_nodes), g_u(profile_nodes);

    double y_prev = 0.0;
    for (int i = 0; i < profile_nodes; i++) {
        const double y = std::exp(t0 + i * dt);
        const auto panel = integrate_gk6(integrand, y_prev, y, 1e-14, 1e-13);
        for (int k = 0; k < 6; k++) acc[k] += panel[k];
        y_prev = y;

        const double a1 = j1(y), da1 = dj1(y);
        const FieldSample b2 = j2(y);
        // profile = -(J1 I1 - J2 I2); derivative uses (H^{-1}f)' = J1' I1 - J2' I2
        auto put = [&](int k, std::vector<double>& v, std::vector<double>& g) {
            const double val = -(a1 * acc[k] - b2.value * acc[k + 1]);
            const double der = -(da1 * acc[k] - b2.deriv * acc[k + 1]);
            v[i] = val;
            g[i] = der * y;   // d/dt = y d/dy
        };
        put(0, v_t, g_t);
        put(2, v_s, g_s);
        put(4, v_u, g_u);
    }

    t1_ = HermiteTable(t0, dt, std::move(v_t), std::move(g_t));
    s1_ = HermiteTable(t0, dt, std::move(v_s), std::move(g_s));
    u1_ = HermiteTable(t0, dt, std::move(v_u), std::move(g_u));
}

const InnerCorrectors& InnerCorrectors::instance() {
    static const InnerCorrectors table;
    return table;
}

ProfileSamples InnerCorrectors::eval(double y) const {
    if (!(y > 0.0)) throw std::domain_error("InnerCorrectors: y <= 0");
    if (y < y_min_) {
        // T1, S1, U1 are all cubic at the origin; scale the first node down
        const double f = (y / y_min_) * (y / y_min_) * (y / y_min_);
        const double t = std::log(y_min_);
        auto scale = [&](const HermiteTable& tab) -> FieldSample {
            const FieldSample s = tab.eval_t(t);
            return {s.value * f, 3.0 * s.value * f / y};
        };
        return {scale(t1_), scale(s1_), scale(u1_)};
    }
    if (y > y_max_)
        throw std::domain_error("InnerCorrectors: y beyond table range");
    const double t = std::log(y);
    auto get = [&](const HermiteTable& tab) -> FieldSample {
        const FieldSample s = tab.eval_t(t);
        return {s.value, s.deriv / y};
    };
    return {get(t1_), get(s1_), get(u1_)};
}

std::vector<std::array<double, 4>> InnerCorrectors::dump_nodes() const {
    std::vector<std::array<double, 4>> rows;
    rows.reserve(profile_nodes);
    const double t0 = t1_.t_min(), dt = t1_.dt();
    for (int i = 0; i < profile_nodes; i++) {
        const double t = t0 + i * dt;
        rows.push_back({std::exp(t), t1_.eval_t(t).value, s1_.eval_t(t).value,
                        u1_.eval_t(t).value});
    }
    return rows;
}

ProfileSamples InnerCorrectors::direct(double y, double abs_tol) {
    auto mk = [&](const std::function<double(double)>& f) -> FieldSample {
        auto i1 = [&](double s) { return f(s) * j2(s).value * s; };
        auto i2 = [&](double s) { return f(s) * j1(s) * s; };
        const double a = integrate_gk(i1, 0.0, y, abs_tol, 1e-13);
        const double b = integrate_gk(i2, 0.0, y, abs_tol, 1e-13);
        return {-(j1(y) * a - j2(y).value * b),
                -(dj1(y) * a - j2(y).deriv * b)};
    };
    return {mk(soliton::lambda0_lambda0_lambda_q),
            mk(soliton::lambda0_lambda_q), mk(soliton::lambda_q)};
}

// --- light-cone correction -------------------------------------------------

double u_infty_series(double lambda, double rho) {
    if (!lambda_admissible(lambda))
        throw std::domain_error("u_infty_series: lambda outside windows");
    if (!(rho > 0.0) || rho >= 1.0)
        throw std::domain_error("u_infty_series: rho must lie in (0,1)");

    const double log_rho = std::log(rho), rho2 = rho * rho;
    const ConnectionCoeffs c0 = connection_coeffs(lambda, 0);

    double c_n = c0.c_n, d_n = c0.d_n;
    double pw = 1.0;   // rho^{2n}
    double sum = 0.0;
    for (std::size_t n = 0; n < 400; n++) {
        const double dn = static_cast<double>(n);
        c_n *= (0.5 * lambda + 1.0 + dn) * (0.5 * (lambda + 1.0) + dn) /
               ((dn + 1.0) * (dn + 2.0));
        d_n += -1.0 / (dn + 1.0) - 1.0 / (dn + 2.0) +
               1.0 / (0.5 * lambda + 1.0 + dn) + 1.0 / (0.5 * (lambda + 1.0) + dn);
        pw *= rho2;
        sum += c_n * pw * (log_rho + 0.5 * d_n);
        const double bound = std::fabs(c_n) * pw * rho2 *
                             (std::fabs(log_rho) + 0.5 * std::fabs(d_n) + 2.0);
        if (bound < 1e-14 * (1.0 + std::fabs(sum))) return rho * sum;
    }
    throw std::runtime_error("u_infty_series: tail tolerance unreachable");
}

double u_infty_factorized(double lambda, double rho) {
    if (!lambda_admissible(lambda))
        throw std::domain_error("u_infty_factorized: lambda outside windows");
    if (!(rho >= 0.3) || rho > 1.0)
        throw std::domain_error("u_infty_factorized: rho must lie in [0.3,1]");

    const double z = (1.0 - rho) * (1.0 + rho);
    const double cc = c_conn(lambda);
    // (h1 - 1) = lambda(lambda-1)/(4 lambda + 2) * 3F2(...) * z; the 3F2
    // carries the extra (1)_n/(2)_n from pulling one factor of n out of
    // the Gauss series, which keeps lambda = 0, 1 exact
    const double f = hyp_3f2(0.5 * lambda + 1.0, 0.5 * (lambda + 1.0), 1.0,
                             lambda + 1.5, 2.0, z);

    // w = (c_conn - 2)/(lambda(lambda-1)); removable at lambda = 0, 1
    const double denom = lambda * (lambda - 1.0);
    double w;
    if (std::fabs(denom) < 1e-9) {
        w = (std::fabs(lambda) < 0.5) ? -2.0 * std::log(2.0)
                                      : 2.0 * std::log(2.0) - 2.0;
    } else {
        w = (cc - 2.0) / denom;
    }

    const double d0 = connection_coeffs(lambda, 0).d_n;
    return (cc * f * z / (4.0 * lambda + 2.0) + w) / rho -
           rho * (std::log(rho) + 0.5 * d0);
}

double u_infty(double lambda, double rho) {
    return (rho < 0.4) ? u_infty_series(lambda, rho)
                       : u_infty_factorized(lambda, rho);
}

} // namespace wmb
