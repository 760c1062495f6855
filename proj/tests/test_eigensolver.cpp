#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "wmb/eigensolver.hpp"
#include "wmb/profiles.hpp"
#include "wmb/specfun.hpp"

using namespace wmb;

namespace {

// independent digamma for the Newton-on-p oracle
double psi_oracle(double x) {
    double acc = 0.0;
    while (x < 30.0) {
        acc -= 1.0 / x;
        x += 1.0;
    }
    const double i = 1.0 / x, i2 = i * i;
    return acc + std::log(x) - 0.5 * i -
           i2 * (1.0 / 12.0 - i2 * (1.0 / 120.0 - i2 / 252.0));
}

double p_oracle(double nu, double lam) {
    const double L = -std::log(nu);
    const double d0 = -psi_oracle(1.0) - psi_oracle(2.0) +
                      psi_oracle(lam / 2.0 + 1.0) + psi_oracle((lam + 1.0) / 2.0);
    return lam * (lam - 1.0) * (L - 1.0 - 0.5 * d0) + lam - 5.0 / 6.0;
}

double lambda_hat_oracle(double nu, int j) {
    double x = 1.0 - j;
    for (int it = 0; it < 80; it++) {
        const double p = p_oracle(nu, x);
        if (std::fabs(p) < 1e-13) return x;
        const double h = 1e-7;
        const double dp = (p_oracle(nu, x + h) - p_oracle(nu, x - h)) / (2 * h);
        x -= p / dp;
    }
    return x;
}

SpectralContext make_ctx(double nu, double delta0 = 0.05) {
    SpectralContext ctx;
    ctx.nu = nu;
    ctx.delta0 = delta0;
    return ctx;
}

} // namespace

TEST_CASE("p_value at the degenerate points") {
    CHECK(p_value(1e-3, 1.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-14));
    CHECK(p_value(1e-3, 0.0) == doctest::Approx(-5.0 / 6.0).epsilon(1e-14));
}

TEST_CASE("lambda_hat roots and expansion") {
    for (double nu : {1e-2, 1e-3, 1e-4}) {
        const double L = -std::log(nu);
        for (int j : {0, 1}) {
            const double lh = lambda_hat(nu, j);
            CHECK(std::fabs(p_value(nu, lh)) <= 1e-13);
            CHECK(std::fabs(lh - (1.0 - j)) <= 2.0 / L);
            CHECK(lh == doctest::Approx(lambda_hat_oracle(nu, j)).epsilon(1e-10));
        }
    }
    // leading 1/|log nu| coefficients at nu = 1e-4
    const double L = -std::log(1e-4);
    CHECK(std::fabs((lambda_hat(1e-4, 0) - 1.0) * L + 1.0 / 6.0) <= 2.0 / L);
    CHECK(std::fabs(lambda_hat(1e-4, 1) * L + 5.0 / 6.0) <= 2.0 / L);
    // spec sample point
    CHECK(std::fabs(lambda_hat(1e-3, 0) - 0.9760) <= 1e-3);
}

TEST_CASE("inner solution reduces to LambdaQ as nu -> 0") {
    const SpectralContext ctx = make_ctx(1e-6);
    const auto phi = inner_solve(ctx, lambda_hat(1e-6, 0));
    double sup = 0.0;
    for (double y = 0.01; y <= 1.0; y *= 1.17) {
        const double diff = phi->eval_inner(y).value - soliton::lambda_q(y);
        sup = std::max(sup, std::fabs(diff));
    }
    CHECK(sup <= 1e-9);
}

TEST_CASE("inner solution matches the corrector ansatz to nu^4") {
    const double nu = 1e-2;
    const SpectralContext ctx = make_ctx(nu);
    const double lam = lambda_hat(nu, 0);
    const auto phi = inner_solve(ctx, lam);
    const auto& tab = InnerCorrectors::instance();
    // noise floor 1e-12 keeps the small-y comparison meaningful in doubles
    for (double y = 0.25; y <= 1.0; y += 0.125) {
        const ProfileSamples p = tab.eval(y);
        const double ansatz =
            soliton::lambda_q(y) +
            nu * nu * (p.t1.value + (2.0 * lam - 1.0) * p.s1.value +
                       lam * (lam - 1.0) * p.u1.value);
        const double diff = std::fabs(phi->eval_inner(y).value - ansatz);
        CHECK(diff <= 100.0 * std::pow(nu, 4) * std::pow(y, 5) + 1e-12);
    }
}

TEST_CASE("inner normalization near the origin") {
    const SpectralContext ctx = make_ctx(1e-3);
    const auto phi = inner_solve(ctx, lambda_hat(1e-3, 1));
    for (double rho : {1e-9, 1e-7}) {
        const double v = phi->eval(rho).value;
        CHECK(v * ctx.nu * ctx.nu / (2.0 * rho) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("outer solution approaches h1/rho as nu -> 0") {
    const SpectralContext ctx = make_ctx(1e-6);
    {
        const auto phi = outer_solve(ctx, 0.97);
        double sup = 0.0;
        for (double rho = 0.5; rho <= 1.0; rho += 0.02) {
            const double ref = h1(0.97, (1.0 - rho) * (1.0 + rho)) / rho;
            sup = std::max(sup, std::fabs(phi->eval(rho).value - ref));
        }
        CHECK(sup <= 1e-9);
    }
    {
        const auto phi = outer_solve(ctx, 1.0);
        double sup = 0.0;
        for (double rho = 0.5; rho <= 1.0; rho += 0.02)
            sup = std::max(sup, std::fabs(phi->eval(rho).value - 1.0 / rho));
        CHECK(sup <= 1e-9);
    }
}

TEST_CASE("outer logarithmic-derivative decay at delta0") {
    const double nu = 1e-3;
    const SpectralContext ctx = make_ctx(nu);
    const double L = ctx.log_nu_abs();
    for (int j : {0, 1}) {
        const auto phi = outer_solve(ctx, lambda_hat(nu, j));
        const FieldSample s = phi->eval(ctx.delta0);
        const double dev = std::fabs(s.deriv / s.value + 1.0 / ctx.delta0);
        CHECK(dev <= 10.0 * ctx.delta0 * std::fabs(std::log(ctx.delta0)) / L);
    }
}

TEST_CASE("matching defect brackets and slope") {
    const double nu = 1e-3;
    const SpectralContext ctx = make_ctx(nu);
    const double L = ctx.log_nu_abs();
    for (int j : {0, 1}) {
        const double lh = lambda_hat(nu, j);
        // bracketing oracle: scan Phi for a sign change in an expanding window
        bool bracketed = false;
        double width = 5.0 * nu * nu * L;
        for (int expand = 0; expand < 12 && !bracketed; expand++, width *= 2.0) {
            double prev = matching_defect(ctx, lh - width);
            for (int i = 1; i <= 50; i++) {
                const double lam = lh - width + 2.0 * width * i / 50.0;
                const double cur = matching_defect(ctx, lam);
                if (prev * cur <= 0.0 && prev != 0.0) {
                    bracketed = true;
                    break;
                }
                prev = cur;
            }
        }
        CHECK(bracketed);

        const EigenPair pair = find_eigenpair(ctx, j);
        CHECK(std::fabs(matching_defect(ctx, pair.lambda)) <=
              ctx.root_tol * L);
        const double slope = matching_slope(ctx, pair.lambda);
        CHECK(std::fabs(slope) >= 0.5 * L);
        // the slope sign follows sign(2 lambda - 1): positive near 1,
        // negative near 0 (the paper's lower bound is a magnitude bound)
        if (j == 0) CHECK(slope > 0.0);
        else CHECK(slope < 0.0);
    }
}

TEST_CASE("matched eigenvalues against the analytic prediction") {
    for (double nu : {1e-2, 1e-3}) {
        const SpectralContext ctx = make_ctx(nu);
        const double L = ctx.log_nu_abs();
        for (int j : {0, 1}) {
            const EigenPair p = find_eigenpair(ctx, j);
            CHECK(std::fabs(p.lambda - p.lambda_hat) <= 100.0 * nu * nu * L);
            CHECK(std::fabs(p.lambda - (1.0 - j)) <= 5.0 / L);
            if (j == 0) {
                CHECK(p.lambda < 1.0);
                CHECK(p.lambda > 1.0 - 5.0 / L);
            } else {
                CHECK(p.lambda < 0.0);
                CHECK(p.lambda > -5.0 / L);
            }
        }
    }
}

TEST_CASE("matching constant approaches the connection coefficient") {
    const double nu = 1e-3;
    const SpectralContext ctx = make_ctx(nu);
    const double L = ctx.log_nu_abs();
    for (int j : {0, 1}) {
        const EigenPair p = find_eigenpair(ctx, j);
        CHECK(std::fabs(p.c_match - c_conn(p.lambda_hat)) <=
              100.0 * nu * nu * L * L);
    }
}

TEST_CASE("matching-radius independence") {
    const double nu = 1e-3;
    for (int j : {0, 1}) {
        const EigenPair a = find_eigenpair(make_ctx(nu, 0.03), j);
        const EigenPair b = find_eigenpair(make_ctx(nu, 0.06), j);
        const SpectralContext ctx = make_ctx(nu);
        CHECK(std::fabs(a.lambda - b.lambda) <= 10.0 * ctx.root_tol);
    }
    // three-radius spread
    const EigenPair a = find_eigenpair(make_ctx(1e-3, 0.03), 0);
    const EigenPair b = find_eigenpair(make_ctx(1e-3, 0.04), 0);
    const EigenPair c = find_eigenpair(make_ctx(1e-3, 0.06), 0);
    const double lo = std::min({a.lambda, b.lambda, c.lambda});
    const double hi = std::max({a.lambda, b.lambda, c.lambda});
    CHECK(hi - lo <= 10.0 * make_ctx(1e-3).root_tol);
}

TEST_CASE("ODE-tolerance independence") {
    for (int j : {0, 1}) {
        SpectralContext loose = make_ctx(1e-3);
        SpectralContext tight = loose;
        tight.ode_tol = loose.ode_tol / 100.0;
        const double la = find_eigenpair(loose, j).lambda;
        const double lb = find_eigenpair(tight, j).lambda;
        CHECK(std::fabs(la - lb) <= 10.0 * loose.root_tol);
    }
}

TEST_CASE("series-start doubling leaves the eigenvalue unchanged") {
    for (int j : {0, 1}) {
        SpectralContext base = make_ctx(1e-3);
        SpectralContext doubled = base;
        doubled.series_start = 2.0 * base.series_start;
        doubled.outer_start = 2.0 * base.outer_start;
        const double la = find_eigenpair(base, j).lambda;
        const double lb = find_eigenpair(doubled, j).lambda;
        CHECK(std::fabs(la - lb) <= 10.0 * base.root_tol);
    }
}

TEST_CASE("eigenvalue drift in nu") {
    for (int j : {0, 1}) {
        const double nu = 1e-3;
        const double la = find_eigenpair(make_ctx(nu), j).lambda;
        const double lb = find_eigenpair(make_ctx(1.05 * nu), j).lambda;
        const double L = -std::log(nu);
        CHECK(std::fabs(lb - la) / std::log(1.05) <= 10.0 / (L * L));
    }
}

TEST_CASE("glued eigenfunction continuity") {
    const double nu = 1e-3;
    const SpectralContext ctx = make_ctx(nu);
    for (int j : {0, 1}) {
        const EigenPair p = find_eigenpair(ctx, j);
        const auto phi = eigenfunction(ctx, p);
        const FieldSample in = phi->inner_at_delta0();
        const FieldSample out = phi->outer_scaled_at_delta0();
        CHECK(std::fabs(in.value - out.value) <=
              1e-13 * std::fabs(in.value));
        CHECK(std::fabs(in.deriv - out.deriv) <=
              10.0 * ctx.root_tol * std::fabs(in.deriv));
        // near-origin behavior 2 rho / nu^2
        const double rho = 1e-8;
        CHECK(phi->eval(rho).value ==
              doctest::Approx(2.0 * rho / (nu * nu)).epsilon(1e-5));
    }
}

TEST_CASE("eigenfunction satisfies its own second-derivative relation") {
    const SpectralContext ctx = make_ctx(1e-3);
    const EigenPair p = find_eigenpair(ctx, 0);
    const auto phi = eigenfunction(ctx, p);
    for (double rho : {0.01, 0.2, 0.7}) {
        const double h = 1e-4 * rho;
        const double fd = (phi->eval(rho + h).value - 2.0 * phi->eval(rho).value +
                           phi->eval(rho - h).value) / (h * h);
        CHECK(phi->second_derivative(rho) == doctest::Approx(fd).epsilon(1e-4));
    }
}

TEST_CASE("ansatz residual stays within the sharp bound") {
    double prev_ratio = 0.0;
    for (double nu : {1e-2, 1e-3}) {
        const SpectralContext ctx = make_ctx(nu);
        const double L = ctx.log_nu_abs();
        for (int j : {0, 1}) {
            const EigenPair p = find_eigenpair(ctx, j);
            const auto phi = eigenfunction(ctx, p);
            const AnsatzResidual ar = ansatz_residual(ctx, *phi);
            CHECK(ar.sup_ratio <= 1e3);
            // at delta0 the raw residual is nu^2 log^2-small, not nu-small
            CHECK(ar.at_delta0 <= 1e3 * nu * nu * L * L);
            CHECK(ar.at_delta0 <= 0.1 * nu);
            if (j == 0) {
                if (prev_ratio > 0.0) CHECK(ar.sup_ratio <= 3.0 * prev_ratio);
                prev_ratio = ar.sup_ratio;
            }
        }
    }
}

TEST_CASE("context validation") {
    SpectralContext bad = make_ctx(1e-3);
    bad.delta0 = 0.2;
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = make_ctx(0.02);
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
    bad = make_ctx(0.03, 0.05);   // nu > delta0/2
    CHECK_THROWS_AS(bad.validate(), std::domain_error);
}
