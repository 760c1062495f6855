#include "wmb/functionals.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "wmb/profiles.hpp"
#include "wmb/quad.hpp"
#include "wmb/specfun.hpp"

namespace wmb {

double weight_g(double lambda_j, double rho) {
    if (lambda_j < -0.45)
        throw std::domain_error("weight_g: lambda_j below integrability margin");
    if (!(rho >= 0.0)) throw std::domain_error("weight_g: rho < 0");
    if (rho > 1.0) return 0.0;
    return std::pow((1.0 - rho) * (1.0 + rho), lambda_j - 0.5);
}

StatePair apply_m_nu(double nu, const StatePair& s) {
    if (!s.closed_form)
        throw std::invalid_argument("apply_m_nu: state lacks closed-form derivatives");
    if (s.eps->variable() != RadialVar::self_similar_rho)
        throw std::invalid_argument("apply_m_nu: state must be in the self-similar variable");

    auto eps = s.eps;
    auto epsd = s.eps_dot;
    const double nu2 = nu * nu;

    // first row: -Lmb eps + eps_dot, with derivative  -eps' - rho eps'' + eps_dot'
    auto first = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [eps, epsd](double r) {
            return -r * eps->eval(r).deriv + epsd->eval(r).value;
        },
        [eps, epsd](double r) {
            return -eps->eval(r).deriv - r * eps->second_derivative(r) +
                   epsd->eval(r).deriv;
        });

    // second row: -H_nu eps - Lmb0 eps_dot
    auto second = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [eps, epsd, nu2](double r) {
            const FieldSample e = eps->eval(r);
            const FieldSample ed = epsd->eval(r);
            const double pot = 1.0 / (r * r) -
                               8.0 * nu2 / ((nu2 + r * r) * (nu2 + r * r));
            const double h = -eps->second_derivative(r) - e.deriv / r +
                             pot * e.value;
            return -h - (ed.value + r * ed.deriv);
        },
        [](double) { return std::numeric_limits<double>::quiet_NaN(); });

    return {first, second, false};
}

// --- the pairing machinery ---------------------------------------------------

namespace {

// integral of f(rho) g_j(rho) phi_j(rho) rho drho over (0,1] with the panel
// split [0,nu], [nu,1/2], [1/2,1]
double weighted_pairing(const Eigenfunction& phi_j,
                        const std::function<double(double)>& f,
                        const QuadOptions& q) {
    const double nu = phi_j.context().nu;
    const double lam = phi_j.pair().lambda;
    auto plain = [&](double rho) {
        return f(rho) * weight_g(lam, rho) * phi_j.eval(rho).value * rho;
    };
    double total = integrate_gk(plain, 0.0, nu, q.abs_tol, q.rel_tol);
    total += integrate_gk(plain, nu, 0.5, q.abs_tol, q.rel_tol);
    total += integrate_tanh_sinh(
        [&](double rho, double one_minus_rho) {
            const double g = std::pow(one_minus_rho * (1.0 + rho), lam - 0.5);
            return f(rho) * g * phi_j.eval(rho).value * rho;
        },
        0.5, 1.0, q.abs_tol, q.rel_tol);
    return total;
}

} // namespace

double ell(const Eigenfunction& phi_j, const StatePair& s,
           const QuadOptions& q) {
    const double lam = phi_j.pair().lambda;
    auto num = [&](double rho) {
        const FieldSample e = s.eps->eval(rho);
        const double ed = s.eps_dot->value_only(rho);
        return (lam + 1.0) * e.value + rho * e.deriv + ed;
    };
    return weighted_pairing(phi_j, num, q);
}

double pair_with_eigen(const Eigenfunction& phi_j, const RadialField& u,
                       const QuadOptions& q) {
    return weighted_pairing(
        phi_j, [&u](double rho) { return u.value_only(rho); }, q);
}

double invariance_defect(const Eigenfunction& phi_j, const StatePair& s,
                         const QuadOptions& q) {
    const StatePair ms = apply_m_nu(phi_j.context().nu, s);
    return ell(phi_j, ms, q) - phi_j.pair().lambda * ell(phi_j, s, q);
}

// --- canonical states --------------------------------------------------------

namespace {

std::shared_ptr<ClosedFormField> zero_field() {
    return std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho, [](double) { return 0.0; },
        [](double) { return 0.0; }, [](double) { return 0.0; });
}

} // namespace

StatePair canonical_state_a() {
    auto eps = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [](double r) { return r * std::exp(-r * r); },
        [](double r) { return (1.0 - 2.0 * r * r) * std::exp(-r * r); },
        [](double r) { return (4.0 * r * r * r - 6.0 * r) * std::exp(-r * r); });
    return {eps, zero_field(), true};
}

StatePair canonical_state_b() {
    auto epsd = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [](double r) { return r * r * (1.0 - r * r); },
        [](double r) { return 2.0 * r - 4.0 * r * r * r; },
        [](double r) { return 2.0 - 12.0 * r * r; });
    return {zero_field(), epsd, true};
}

StatePair canonical_state_c() {
    auto eps = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [](double r) {
            const double w = 1.0 - r * r;
            return r * w * w;
        },
        [](double r) { return (1.0 - r * r) * (1.0 - 5.0 * r * r); },
        [](double r) { return 20.0 * r * r * r - 12.0 * r; });
    auto epsd = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [](double r) { return r * std::exp(-r); },
        [](double r) { return (1.0 - r) * std::exp(-r); },
        [](double r) { return (r - 2.0) * std::exp(-r); });
    return {eps, epsd, true};
}

StatePair lambda_q_state(double nu) {
    auto eps = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [nu](double r) { return soliton::lambda_q(r / nu) / nu; },
        [nu](double r) { return soliton::dlambda_q(r / nu) / (nu * nu); },
        [nu](double r) { return soliton::d2lambda_q(r / nu) / (nu * nu * nu); });
    return {eps, zero_field(), true};
}

StatePair eigen_state(const std::shared_ptr<const Eigenfunction>& phi_k) {
    const double lam = phi_k->pair().lambda;
    auto eps = std::static_pointer_cast<const RadialField>(phi_k);
    auto epsd = std::make_shared<ClosedFormField>(
        RadialVar::self_similar_rho,
        [phi_k, lam](double r) {
            const FieldSample s = phi_k->eval(r);
            return lam * s.value + r * s.deriv;
        },
        [phi_k, lam](double r) {
            const FieldSample s = phi_k->eval(r);
            return (lam + 1.0) * s.deriv + r * phi_k->second_derivative(r);
        });
    return {eps, epsd, true};
}

// --- the engine ----------------------------------------------------------------

int FunctionalEngine::check(int j) {
    if (j != 0 && j != 1)
        throw std::domain_error("FunctionalEngine: j must be 0 or 1");
    return j;
}

FunctionalEngine::FunctionalEngine(const SpectralContext& ctx) : ctx_(ctx) {
    ctx_.validate();
    for (int j = 0; j < 2; j++) {
        pairs_[j] = find_eigenpair(ctx_, j);
        phis_[j] = eigenfunction(ctx_, pairs_[j]);
    }
}

double FunctionalEngine::ell_state(int j, const StatePair& s) const {
    return ell(*phis_[check(j)], s, quad);
}

double FunctionalEngine::ell_eigen(int j, int k) const {
    return ell(*phis_[check(j)], eigen_state(phis_[check(k)]), quad);
}

double FunctionalEngine::invariance(int j, const StatePair& s) const {
    return invariance_defect(*phis_[check(j)], s, quad);
}

double FunctionalEngine::frkb(int j) const {
    return ell(*phis_[check(j)], lambda_q_state(ctx_.nu), quad);
}

double FunctionalEngine::frkc(int j) const {
    check(j);
    const double transv = ell_eigen(j, 0) - ell_eigen(j, 1);
    const StatePair lq = lambda_q_state(ctx_.nu);
    const double pairing = pair_with_eigen(*phis_[j], *lq.eps, quad);
    return 0.5 * (transv + pairing);
}

CrosscheckResult FunctionalEngine::closed_form_crosschecks(int j) const {
    check(j);
    const double nu = ctx_.nu;
    const double L = ctx_.log_nu_abs();
    const double lam = pairs_[j].lambda;

    auto lq = [nu](double rho) { return soliton::lambda_q(rho / nu) / nu; };
    auto l0lq = [nu](double rho) {
        return soliton::lambda0_lambda_q(rho / nu) / nu;
    };

    auto weighted = [&](const std::function<double(double)>& u,
                        const std::function<double(double)>& v) {
        auto plain = [&](double rho) {
            return u(rho) * weight_g(lam, rho) * v(rho) * rho;
        };
        double total = integrate_gk(plain, 0.0, nu, quad.abs_tol, quad.rel_tol);
        total += integrate_gk(plain, nu, 0.5, quad.abs_tol, quad.rel_tol);
        total += integrate_tanh_sinh(
            [&](double rho, double one_minus_rho) {
                const double g = std::pow(one_minus_rho * (1.0 + rho), lam - 0.5);
                return u(rho) * g * v(rho) * rho;
            },
            0.5, 1.0, quad.abs_tol, quad.rel_tol);
        return total;
    };

    CrosscheckResult r;
    r.quad_lambda_q = weighted(lq, lq);
    r.formula_lambda_q =
        4.0 * L - 2.0 + 2.0 * (digamma(1.0) - digamma(lam + 0.5));
    r.quad_scaling = weighted(l0lq, lq);
    r.formula_scaling = 2.0;
    r.sub_integral = integrate_gk(
        [](double y) {
            const double s = 1.0 + y * y;
            return 4.0 * y * y * y / (s * s);
        },
        0.0, 1.0 / nu, quad.abs_tol, quad.rel_tol);
    r.sub_integral_exact =
        2.0 * std::log1p(1.0 / (nu * nu)) - 2.0 / (1.0 + nu * nu);
    return r;
}

} // namespace wmb
