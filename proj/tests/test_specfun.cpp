#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "wmb/specfun.hpp"

using namespace wmb;

namespace {

// independent digamma oracle: recurrence shift to x >= 30, then the plain
// Euler-Maclaurin tail; kept free of the library implementation on purpose
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

// Euler-Mascheroni via the harmonic-sum tail with Euler-Maclaurin correction
double gamma_oracle() {
    const int n = 100000;
    long double h = 0.0L;   // summed smallest-first to keep rounding flat
    for (int k = n; k >= 1; k--) h += 1.0L / k;
    const long double N = n;
    const long double g = h - std::log(N) - 0.5L / N + 1.0L / (12.0L * N * N) -
                          1.0L / (120.0L * N * N * N * N);
    return static_cast<double>(g);
}

} // namespace

TEST_CASE("digamma special values") {
    const double g = gamma_oracle();
    CHECK(std::fabs(g - euler_gamma) < 1e-14);
    CHECK(digamma(1.0) == doctest::Approx(-euler_gamma).epsilon(1e-13));
    CHECK(digamma(0.5) ==
          doctest::Approx(-euler_gamma - 2.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(digamma(2.0) == doctest::Approx(1.0 - euler_gamma).epsilon(1e-13));
    CHECK(digamma(1.5) ==
          doctest::Approx(-euler_gamma - 2.0 * std::log(2.0) + 2.0).epsilon(1e-13));
    CHECK(digamma(4.7) - digamma(3.7) == doctest::Approx(1.0 / 3.7).epsilon(1e-13));
    CHECK_THROWS_AS(digamma(0.0), std::domain_error);
    CHECK_THROWS_AS(digamma(-1.3), std::domain_error);
}

TEST_CASE("digamma recurrence and oracle agreement") {
    for (double x : {0.1, 0.5, 1.0, 3.7, 10.0}) {
        CHECK(std::fabs(digamma(x + 1.0) - digamma(x) - 1.0 / x) <= 1e-12);
        CHECK(digamma(x) == doctest::Approx(psi_oracle(x)).epsilon(1e-13));
    }
}

TEST_CASE("trigamma recurrence and known value") {
    // psi'(1) = pi^2/6
    CHECK(trigamma(1.0) == doctest::Approx(M_PI * M_PI / 6.0).epsilon(1e-12));
    for (double x : {0.3, 1.0, 2.5, 7.0})
        CHECK(std::fabs(trigamma(x) - trigamma(x + 1.0) - 1.0 / (x * x)) <= 1e-12);
}

TEST_CASE("log_gamma against factorials and reflection") {
    CHECK(log_gamma(1.0) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(log_gamma(5.0) == doctest::Approx(std::log(24.0)).epsilon(1e-14));
    CHECK(log_gamma(0.5) == doctest::Approx(0.5 * std::log(M_PI)).epsilon(1e-14));
    // duplication-style consistency at a generic point
    const double x = 3.3;
    CHECK(log_gamma(x + 1.0) - log_gamma(x) == doctest::Approx(std::log(x)).epsilon(1e-13));
}

TEST_CASE("pochhammer") {
    CHECK(pochhammer(2.7, 0) == 1.0);
    CHECK(pochhammer(0.5, 3) == doctest::Approx(15.0 / 8.0).epsilon(1e-15));
    CHECK(pochhammer(0.0, 2) == 0.0);
}

TEST_CASE("gauss_2f1 basics") {
    CHECK(gauss_2f1({1.3, -0.7, 2.1, 0.0}) == 1.0);
    // F(1,1;2;z) = -log(1-z)/z
    CHECK(gauss_2f1({1.0, 1.0, 2.0, 0.5}) ==
          doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-14));
    CHECK(gauss_2f1({0.5, 0.0, 1.5, 0.7}) == 1.0);
    CHECK_THROWS_AS(gauss_2f1({1.0, 1.0, -2.0, 0.5}), std::domain_error);
}

TEST_CASE("gauss_2f1 against the binomial identity") {
    // F(a,b;b;z) = (1-z)^{-a} for several a
    for (double a : {0.25, 1.0, 1.75}) {
        for (double z : {-0.6, -0.2, 0.3, 0.8}) {
            CHECK(gauss_2f1({a, 2.5, 2.5, z}) ==
                  doctest::Approx(std::pow(1.0 - z, -a)).epsilon(1e-13));
        }
    }
}

TEST_CASE("h1 degeneracy at lambda = 0 and 1") {
    CHECK(h1(1.0, 0.4) == 1.0);
    CHECK(h1(0.0, 0.8) == 1.0);
    for (double z = -0.9; z <= 0.9; z += 0.2112) {
        CHECK(h1(0.0, z) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(h1(1.0, z) == doctest::Approx(1.0).epsilon(1e-15));
    }
    CHECK_THROWS_AS(h1(0.3, 0.95), std::domain_error);
    CHECK_THROWS_AS(h1(2.7, 0.1), std::domain_error);
}

TEST_CASE("h1 satisfies the light-cone hypergeometric equation") {
    // z(1-z) h'' + (lambda+1/2)(1-z) h' - lambda(lambda-1)/4 h = 0
    for (double lambda : {0.07, 0.5, 0.93, 1.08}) {
        for (int i = 0; i < 20; i++) {
            const double z = 0.05 + 0.8 * i / 19.0;
            const double h = h1(lambda, z);
            const double hp = h1_dz(lambda, z, 1);
            const double hpp = h1_dz(lambda, z, 2);
            const double resid = z * (1.0 - z) * hpp +
                                 (lambda + 0.5) * (1.0 - z) * hp -
                                 0.25 * lambda * (lambda - 1.0) * h;
            CHECK(std::fabs(resid) <= 1e-8);
        }
    }
}

TEST_CASE("connection coefficients") {
    CHECK(connection_coeffs(0.37, 0).c_n == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(connection_coeffs(1.0, 0).d_n ==
          doctest::Approx(1.0 - 2.0 * std::log(2.0)).epsilon(1e-13));
    CHECK(connection_coeffs(0.0, 0).d_n ==
          doctest::Approx(-1.0 - 2.0 * std::log(2.0)).epsilon(1e-13));
    // d_n stays finite over the windows
    for (double lambda : {-0.3, 0.0, 0.45, 0.8, 1.3}) {
        for (std::size_t n : {0u, 1u, 5u, 20u}) {
            const auto cd = connection_coeffs(lambda, n);
            CHECK(std::isfinite(cd.c_n));
            CHECK(std::isfinite(cd.d_n));
        }
    }
}

TEST_CASE("h1_near_origin degeneracy") {
    for (double rho : {0.05, 0.2, 0.45, 0.7}) {
        CHECK(h1_near_origin(1.0, rho) == doctest::Approx(1.0 / rho).epsilon(1e-14));
        CHECK(h1_near_origin(0.0, rho) == doctest::Approx(1.0 / rho).epsilon(1e-14));
    }
}

TEST_CASE("series and connection expansion agree on the overlap") {
    for (double lambda : {0.03, 0.5, 0.97}) {
        for (double rho = 0.3; rho <= 0.7 + 1e-12; rho += 0.05) {
            const double a = h1_near_origin(lambda, rho);
            const double z = (1.0 - rho) * (1.0 + rho);
            const double b = h1(lambda, z) / rho;
            CHECK(std::fabs(a - b) <= 1e-9 / rho);
        }
    }
}

TEST_CASE("dual-formula consistency at the spec sample points") {
    const double a = h1_near_origin(0.97, 0.3);
    const double b = h1(0.97, 1.0 - 0.09) / 0.3;
    CHECK(std::fabs(a - b) <= 1e-10);

    const double c = h1_near_origin(0.97, 0.5);
    const double d = h1(0.97, 0.75) / 0.5;
    CHECK(std::fabs(c - d) <= 1e-10);
}

TEST_CASE("connection coefficient c_conn") {
    CHECK(c_conn(0.0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(c_conn(1.0) == doctest::Approx(2.0).epsilon(1e-14));
    // log-gamma oracle at 0.9
    const double direct = 2.0 *
        std::exp(std::lgamma(0.45 + 1.0) + std::lgamma(0.95) - std::lgamma(1.4));
    CHECK(c_conn(0.9) == doctest::Approx(direct).epsilon(1e-13));
    CHECK(std::fabs(c_conn(0.9) - 2.0) < 0.2);
}

TEST_CASE("h1_near_origin truncation failure is reported") {
    CHECK_THROWS_AS(h1_near_origin(0.97, 0.7, 3), std::runtime_error);
    CHECK_THROWS_AS(h1_near_origin(0.5, 0.8), std::domain_error);
}
