#include "wmb/eigensolver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "wmb/ode.hpp"
#include "wmb/profiles.hpp"
#include "wmb/specfun.hpp"

namespace wmb {

void SpectralContext::validate() const {
    if (!(nu > 0.0) || nu > 1e-2)
        throw std::domain_error("SpectralContext: nu must lie in (0, 1e-2]");
    if (delta0 < 0.02 || delta0 > 0.1)
        throw std::domain_error("SpectralContext: delta0 must lie in [0.02, 0.1]");
    if (nu > 0.5 * delta0)
        throw std::domain_error("SpectralContext: nu must be <= delta0/2");
    if (!(ode_tol > 0.0) || !(root_tol > 0.0))
        throw std::domain_error("SpectralContext: tolerances must be positive");
    if (!(series_start > 0.0) || series_start > 1e-2)
        throw std::domain_error("SpectralContext: series_start out of range");
    if (!(outer_start > 0.0) || outer_start > 1e-1)
        throw std::domain_error("SpectralContext: outer_start out of range");
}

double SpectralContext::log_nu_abs() const { return -std::log(nu); }

// --- analytic eigenvalue predictions ---------------------------------------

static double d0_of(double lambda) {
    return connection_coeffs(lambda, 0).d_n;
}

double p_value(double nu, double lambda) {
    const double L = -std::log(nu);
    return lambda * (lambda - 1.0) * (L - 1.0 - 0.5 * d0_of(lambda)) +
           lambda - 5.0 / 6.0;
}

double p_deriv_lambda(double nu, double lambda) {
    const double L = -std::log(nu);
    const double d0p = 0.5 * trigamma(0.5 * lambda + 1.0) +
                       0.5 * trigamma(0.5 * (lambda + 1.0));
    return (2.0 * lambda - 1.0) * (L - 1.0 - 0.5 * d0_of(lambda)) -
           0.5 * lambda * (lambda - 1.0) * d0p + 1.0;
}

double lambda_hat(double nu, int j) {
    if (!(nu > 0.0) || nu > 1e-2)
        throw std::domain_error("lambda_hat: nu must lie in (0, 1e-2]");
    if (j != 0 && j != 1) throw std::domain_error("lambda_hat: j must be 0 or 1");
    const double L = -std::log(nu);
    double x = 1.0 - j;
    for (int it = 0; it < 60; it++) {
        const double p = p_value(nu, x);
        if (std::fabs(p) <= 1e-13) {
            if (std::fabs(x - (1.0 - j)) > 2.0 / L)
                throw std::runtime_error("lambda_hat: root left the window");
            return x;
        }
        x -= p / p_deriv_lambda(nu, x);
    }
    throw std::runtime_error("lambda_hat: Newton did not converge");
}

// --- inner solve ------------------------------------------------------------

namespace {

struct FrobeniusStart {
    double a2, a4;
};

FrobeniusStart frobenius_coeffs(double nu, double lambda) {
    const double n2 = nu * nu;
    const double a2 = -1.0 + n2 * (lambda + 1.0) * (lambda + 2.0) / 8.0;
    const double a4 =
        (16.0 - a2 * (8.0 - n2 * (lambda + 3.0) * (lambda + 4.0))) / 24.0;
    return {a2, a4};
}

OdeRhs inner_rhs(double nu, double lambda) {
    const double n2 = nu * nu;
    return [n2, lambda](double y, const double* u, double* du) {
        const double s = 1.0 + y * y;
        const double pot = 1.0 / (y * y) - 8.0 / (s * s) + n2 * lambda * (lambda + 1.0);
        const double drift = 1.0 / y - n2 * (2.0 * lambda + 2.0) * y;
        du[0] = u[1];
        du[1] = (-drift * u[1] + pot * u[0]) / (1.0 - n2 * y * y);
    };
}

// integrate the inner problem from y0 to y_end; if `nodes` is non-null,
// record (ln y, phi, y phi') Hermite data at the requested points
void run_inner(const SpectralContext& ctx, double lambda, double y_end,
               double* u /*[phi, phi']*/,
               const std::vector<double>* nodes = nullptr,
               std::vector<double>* values = nullptr,
               std::vector<double>* dvalues = nullptr) {
    const double y0 = ctx.series_start;
    const FrobeniusStart fs = frobenius_coeffs(ctx.nu, lambda);
    const double y02 = y0 * y0;
    u[0] = 2.0 * y0 * (1.0 + fs.a2 * y02 + fs.a4 * y02 * y02);
    u[1] = 2.0 * (1.0 + 3.0 * fs.a2 * y02 + 5.0 * fs.a4 * y02 * y02);

    OdeOptions opt;
    opt.rel_tol = ctx.ode_tol;
    opt.abs_tol = 1e-4 * ctx.ode_tol;
    Dop853 solver(2, inner_rhs(ctx.nu, lambda), opt);

    if (nodes) {
        values->reserve(nodes->size());
        dvalues->reserve(nodes->size());
        solver.integrate(y0, y_end, u, *nodes,
                         [&](double y, const double* s) {
                             values->push_back(s[0]);
                             dvalues->push_back(y * s[1]);
                             return true;
                         });
    } else {
        solver.integrate(y0, y_end, u);
    }
}

} // namespace

std::shared_ptr<InnerEigenField> inner_solve(const SpectralContext& ctx,
                                             double lambda) {
    ctx.validate();
    if (!lambda_admissible(lambda))
        throw std::domain_error("inner_solve: lambda outside windows");

    auto field = std::make_shared<InnerEigenField>();
    field->nu_ = ctx.nu;
    field->lambda_ = lambda;
    field->y0_ = ctx.series_start;
    field->y_end_ = 2.0 * ctx.delta0 / ctx.nu;
    const FrobeniusStart fs = frobenius_coeffs(ctx.nu, lambda);
    field->a2_ = fs.a2;
    field->a4_ = fs.a4;

    const double t0 = std::log(field->y0_), t1 = std::log(field->y_end_);
    const int per_decade = 600;
    const int n = std::max(64, static_cast<int>((t1 - t0) / std::log(10.0) *
                                                per_decade));
    const double dt = (t1 - t0) / n;
    std::vector<double> nodes(n);
    for (int i = 1; i <= n; i++) nodes[i - 1] = std::exp(t0 + i * dt);

    // first node is y0 itself; run_inner appends the rest
    std::vector<double> values, dvalues;
    const double y02 = field->y0_ * field->y0_;
    values.push_back(2.0 * field->y0_ * (1.0 + fs.a2 * y02 + fs.a4 * y02 * y02));
    dvalues.push_back(field->y0_ * 2.0 *
                      (1.0 + 3.0 * fs.a2 * y02 + 5.0 * fs.a4 * y02 * y02));
    double u[2];
    run_inner(ctx, lambda, field->y_end_, u, &nodes, &values, &dvalues);

    field->table_ = HermiteTable(t0, dt, std::move(values), std::move(dvalues));
    return field;
}

double InnerEigenField::snap_to_node(double y) const {
    if (y <= y0_ || y >= y_end_) return y;
    const double t = std::log(y);
    const double k = std::round((t - table_.t_min()) / table_.dt());
    return std::exp(table_.t_min() + k * table_.dt());
}

FieldSample InnerEigenField::eval_inner(double y) const {
    if (!(y > 0.0)) throw std::domain_error("InnerEigenField: y <= 0");
    if (y < y0_) {
        const double y2 = y * y;
        return {2.0 * y * (1.0 + a2_ * y2 + a4_ * y2 * y2),
                2.0 * (1.0 + 3.0 * a2_ * y2 + 5.0 * a4_ * y2 * y2)};
    }
    if (y > y_end_ * (1.0 + 1e-12))
        throw std::domain_error("InnerEigenField: y beyond 2 delta0 / nu");
    const FieldSample s = table_.eval_t(std::log(y));
    return {s.value, s.deriv / y};
}

FieldSample InnerEigenField::eval(double rho) const {
    const FieldSample s = eval_inner(rho / nu_);
    return {s.value / nu_, s.deriv / (nu_ * nu_)};
}

// --- outer solve -------------------------------------------------------------

namespace {

OdeRhs outer_rhs(double nu, double lambda) {
    const double n2 = nu * nu;
    const double quarter = 0.25 * lambda * (lambda - 1.0);
    return [n2, lambda, quarter](double z, const double* u, double* du) {
        const double w = n2 + 1.0 - z;
        const double g = 2.0 * n2 / (w * w);
        du[0] = u[1];
        du[1] = (-(lambda + 0.5) * (1.0 - z) * u[1] + (quarter - g) * u[0]) /
                (z * (1.0 - z));
    };
}

// Taylor coefficients f_0..f_6 of the analytic solution at z = 0 with
// f(0) = 1, from (m+1)(m+lambda+1/2) f_{m+1} =
//   [m(m-1) + (lambda+1/2) m + lambda(lambda-1)/4] f_m - sum g_k f_{m-k}
void outer_taylor(double nu, double lambda, double* f) {
    const double n2 = nu * nu;
    const double quarter = 0.25 * lambda * (lambda - 1.0);
    const double base = 1.0 + n2;
    double gk[7];
    double pw = base * base;
    for (int k = 0; k < 7; k++) {
        pw *= base;
        gk[k] = 2.0 * n2 * (k + 1.0) / (pw / base);
    }
    // gk[k] = 2 nu^2 (k+1) / (1+nu^2)^{k+2}
    f[0] = 1.0;
    for (int m = 0; m < 6; m++) {
        double conv = 0.0;
        for (int k = 0; k <= m; k++) conv += gk[k] * f[m - k];
        const double num =
            (m * (m - 1.0) + (lambda + 0.5) * m + quarter) * f[m] - conv;
        f[m + 1] = num / ((m + 1.0) * (m + lambda + 0.5));
    }
}

FieldSample taylor_eval(const double* f, double z) {
    double v = 0.0, d = 0.0;
    for (int m = 6; m >= 1; m--) {
        v = v * z + f[m];
        d = d * z + m * f[m];
    }
    v = v * z + f[0];
    return {v, d};
}

} // namespace

std::shared_ptr<OuterEigenField> outer_solve(const SpectralContext& ctx,
                                             double lambda) {
    ctx.validate();
    if (!lambda_admissible(lambda))
        throw std::domain_error("outer_solve: lambda outside windows");

    auto field = std::make_shared<OuterEigenField>();
    field->nu_ = ctx.nu;
    field->lambda_ = lambda;
    field->z1_ = ctx.outer_start;
    field->z_end_ = 1.0 - 0.25 * ctx.delta0 * ctx.delta0;
    outer_taylor(ctx.nu, lambda, field->taylor_);

    const int n = 1600;
    const double dz = (field->z_end_ - field->z1_) / n;
    std::vector<double> nodes(n);
    for (int i = 1; i <= n; i++) nodes[i - 1] = field->z1_ + i * dz;

    const FieldSample start = taylor_eval(field->taylor_, field->z1_);
    double u[2] = {start.value, start.deriv};
    std::vector<double> values{start.value}, dvalues{start.deriv};

    OdeOptions opt;
    opt.rel_tol = ctx.ode_tol;
    opt.abs_tol = 1e-4 * ctx.ode_tol;
    Dop853 solver(2, outer_rhs(ctx.nu, lambda), opt);
    solver.integrate(field->z1_, field->z_end_, u, nodes,
                     [&](double, const double* s) {
                         values.push_back(s[0]);
                         dvalues.push_back(s[1]);
                         return true;
                     });

    field->table_ = HermiteTable(field->z1_, dz, std::move(values),
                                 std::move(dvalues));
    return field;
}

FieldSample OuterEigenField::eval_z(double z) const {
    if (z < 0.0 || z > z_end_ * (1.0 + 1e-12))
        throw std::domain_error("OuterEigenField: z out of range");
    if (z <= z1_) return taylor_eval(taylor_, z);
    return table_.eval_t(z);
}

FieldSample OuterEigenField::eval_rho(double rho, double one_minus_rho) const {
    const double z = one_minus_rho * (1.0 + rho);
    const FieldSample f = eval_z(z);
    return {f.value / rho, -2.0 * f.deriv - f.value / (rho * rho)};
}

FieldSample OuterEigenField::eval(double rho) const {
    if (!(rho > 0.0) || rho > 1.0)
        throw std::domain_error("OuterEigenField: rho out of (0, 1]");
    return eval_rho(rho, 1.0 - rho);
}

// --- matching ----------------------------------------------------------------

namespace {

// boundary data of both branches at delta0 without dense tables
struct MatchData {
    FieldSample inner;   // rho-variable
    FieldSample outer;
};

MatchData match_data(const SpectralContext& ctx, double lambda) {
    const double nu = ctx.nu, d0 = ctx.delta0;

    double ui[2];
    run_inner(ctx, lambda, d0 / nu, ui);
    const FieldSample inner{ui[0] / nu, ui[1] / (nu * nu)};

    double taylor[7];
    outer_taylor(nu, lambda, taylor);
    const double z_target = (1.0 - d0) * (1.0 + d0);
    const FieldSample start = taylor_eval(taylor, ctx.outer_start);
    double uo[2] = {start.value, start.deriv};
    OdeOptions opt;
    opt.rel_tol = ctx.ode_tol;
    opt.abs_tol = 1e-4 * ctx.ode_tol;
    Dop853 solver(2, outer_rhs(nu, lambda), opt);
    solver.integrate(ctx.outer_start, z_target, uo);
    const FieldSample outer{uo[0] / d0, -2.0 * uo[1] - uo[0] / (d0 * d0)};

    return {inner, outer};
}

} // namespace

double matching_defect(const SpectralContext& ctx, double lambda) {
    ctx.validate();
    if (!lambda_admissible(lambda))
        throw std::domain_error("matching_defect: lambda outside windows");
    const MatchData m = match_data(ctx, lambda);
    if (m.outer.value == 0.0)
        throw std::runtime_error("matching_defect: degenerate matching, "
                                 "phi_out(delta0) = 0");
    return m.inner.deriv - (m.outer.deriv / m.outer.value) * m.inner.value;
}

double matching_slope(const SpectralContext& ctx, double lambda) {
    const double h = 1e-4 / ctx.log_nu_abs();
    return (matching_defect(ctx, lambda + h) -
            matching_defect(ctx, lambda - h)) / (2.0 * h);
}

EigenPair find_eigenpair(const SpectralContext& ctx, int j) {
    ctx.validate();
    if (j != 0 && j != 1)
        throw std::domain_error("find_eigenpair: j must be 0 or 1");

    const double L = ctx.log_nu_abs();
    const double center = 1.0 - j;
    const double window = 5.0 / L;
    const double lam_hat = lambda_hat(ctx.nu, j);

    double a = lam_hat;
    double b = lam_hat * (1.0 + 1e-4);
    double fa = matching_defect(ctx, a);
    double fb = matching_defect(ctx, b);
    const double tol = ctx.root_tol * L;

    EigenPair pair;
    pair.j = j;
    pair.lambda_hat = lam_hat;

    for (int it = 0; it < 40; it++) {
        if (std::fabs(fb) <= tol) {
            pair.lambda = b;
            pair.defect = fb;
            pair.iterations = it;
            const MatchData m = match_data(ctx, b);
            pair.c_match = m.inner.value / m.outer.value;
            return pair;
        }
        if (fb == fa)
            throw std::runtime_error("find_eigenpair: flat secant step");
        double next = b - fb * (b - a) / (fb - fa);
        if (std::fabs(next - center) > window)
            throw std::runtime_error("find_eigenpair: iterate left the "
                                     "eigenvalue window (bracket lost)");
        a = b;
        fa = fb;
        b = next;
        fb = matching_defect(ctx, b);
    }
    throw std::runtime_error("find_eigenpair: iteration cap exceeded");
}

// --- glued eigenfunction -------------------------------------------------------

Eigenfunction::Eigenfunction(const SpectralContext& ctx, const EigenPair& pair)
    : ctx_(ctx), pair_(pair),
      inner_(inner_solve(ctx, pair.lambda)),
      outer_(outer_solve(ctx, pair.lambda)) {
    // glue with the dense branches' own boundary ratio so value continuity
    // is exact by construction; it agrees with pair.c_match to solver
    // accuracy
    glue_ = inner_->eval(ctx_.delta0).value / outer_->eval(ctx_.delta0).value;
}

std::shared_ptr<Eigenfunction> eigenfunction(const SpectralContext& ctx,
                                             const EigenPair& pair) {
    return std::make_shared<Eigenfunction>(ctx, pair);
}

FieldSample Eigenfunction::eval(double rho) const {
    if (!(rho > 0.0) || rho > 1.0)
        throw std::domain_error("Eigenfunction: rho out of (0, 1]");
    if (rho < ctx_.delta0) return inner_->eval(rho);
    const FieldSample s = outer_->eval(rho);
    return {glue_ * s.value, glue_ * s.deriv};
}

double Eigenfunction::second_derivative(double rho) const {
    // from the eigenvalue equation:
    // (1-rho^2) phi'' = -(1/rho - (2L+2) rho) phi' + (V_nu/rho^2 + L(L+1)) phi
    if (!(rho > 0.0) || rho >= 1.0)
        throw std::domain_error("Eigenfunction: second derivative needs rho < 1");
    const FieldSample s = eval(rho);
    const double lam = pair_.lambda;
    const double nu2 = ctx_.nu * ctx_.nu;
    const double pot = 1.0 / (rho * rho) - 8.0 * nu2 / ((nu2 + rho * rho) * (nu2 + rho * rho)) +
                       lam * (lam + 1.0);
    const double drift = 1.0 / rho - (2.0 * lam + 2.0) * rho;
    return (-drift * s.deriv + pot * s.value) / (1.0 - rho * rho);
}

double Eigenfunction::inner_node(double y) const {
    return inner_->snap_to_node(y);
}

FieldSample Eigenfunction::inner_at_delta0() const {
    return inner_->eval(ctx_.delta0);
}

FieldSample Eigenfunction::outer_scaled_at_delta0() const {
    const FieldSample s = outer_->eval(ctx_.delta0);
    return {glue_ * s.value, glue_ * s.deriv};
}

// --- ansatz residual -------------------------------------------------------------

namespace {

// smooth cutoff: 1 for r <= 1, 0 for r >= 2, quintic smoothstep between
double chi(double r) {
    if (r <= 1.0) return 1.0;
    if (r >= 2.0) return 0.0;
    const double x = r - 1.0;
    return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

} // namespace

double ansatz_residual_at(const SpectralContext& ctx, const Eigenfunction& phi,
                          double rho) {
    const double nu = ctx.nu;
    const double lam = phi.pair().lambda;
    const double y = rho / nu;
    const auto& tab = InnerCorrectors::instance();
    const ProfileSamples ps = tab.eval(y);

    double ansatz = soliton::lambda_q(y) / nu +
                    nu * (ps.t1.value + (2.0 * lam - 1.0) * ps.s1.value +
                          lam * (lam - 1.0) * ps.u1.value);
    const double cut = 1.0 - chi(y);
    if (cut > 0.0)
        ansatz += cut * lam * (lam - 1.0) * u_infty(lam, rho);

    return phi.eval(rho).value - ansatz;
}

AnsatzResidual ansatz_residual(const SpectralContext& ctx,
                               const Eigenfunction& phi) {
    const double nu = ctx.nu;
    const int n = 400;
    const double t0 = std::log(nu), t1 = 0.0;
    double sup = 0.0;
    for (int i = 0; i <= n; i++) {
        double rho = std::min(std::exp(t0 + (t1 - t0) * i / n), 1.0);
        if (rho < ctx.delta0) {
            // evaluate at a stored inner node so the comparison is free of
            // interpolation error (the remainder scale is nu^4)
            const double y = phi.inner_node(rho / nu);
            rho = std::min(nu * y, ctx.delta0 * (1.0 - 1e-9));
            if (rho < nu) rho = nu;
        }
        const double r = ansatz_residual_at(ctx, phi, rho);
        const double lg = std::log(rho / nu);
        const double weight = nu * nu * rho * (1.0 + lg * lg);
        sup = std::max(sup, std::fabs(r) / weight);
    }
    return {sup, std::fabs(ansatz_residual_at(ctx, phi, ctx.delta0))};
}

} // namespace wmb
