// Construction of the first two eigenpairs of the self-similar linearized
// operator by matched shooting: a regular inner solution built from a
// Frobenius start at the origin, an outer solution analytic at the light
// cone built from a Taylor start at z = 0, and a secant iteration on the
// derivative-matching defect at the intermediate radius delta0.

#ifndef WMB_EIGENSOLVER_HPP
#define WMB_EIGENSOLVER_HPP

#include <memory>

#include "wmb/radial.hpp"

namespace wmb {

/// Parameters of one spectral computation.
struct SpectralContext {
    double nu = 1e-3;
    double delta0 = 0.05;        // matching radius
    double ode_tol = 1e-11;      // relative ODE tolerance
    double root_tol = 1e-8;      // eigenvalue tolerance
    double series_start = 1e-4;  // inner Frobenius offset y0
    double outer_start = 1e-3;   // outer Taylor offset z1

    // Enforces 0 < nu <= 1e-2, delta0 in [0.02, 0.1] and nu <= delta0/2.
    void validate() const;
    double log_nu_abs() const;   // |log nu|
};

struct EigenPair {
    int j = 0;                  // 0 or 1
    double lambda = 0.0;        // matched eigenvalue
    double lambda_hat = 0.0;    // root of p(nu; .)
    double c_match = 0.0;       // phi_inn(delta0)/phi_out(delta0)
    double defect = 0.0;        // matching defect at lambda
    int iterations = 0;
};

// p(nu; lambda) = lambda(lambda-1)(|log nu| - 1 - d0(lambda)/2) + lambda - 5/6
double p_value(double nu, double lambda);
double p_deriv_lambda(double nu, double lambda);

// Newton root of p near 1-j, converged to |p| <= 1e-13.
double lambda_hat(double nu, int j);

/// Regular inner solution, exposed in the self-similar variable on
/// (0, 2 delta0].  Normalized so the inner-variable slope at the origin is 2.
class InnerEigenField final : public RadialField {
public:
    FieldSample eval(double rho) const override;
    RadialVar variable() const override { return RadialVar::self_similar_rho; }

    // inner-variable access, y in (0, 2 delta0 / nu]
    FieldSample eval_inner(double y) const;
    double nu() const { return nu_; }
    double lambda() const { return lambda_; }
    // nearest stored node (interpolation-free evaluation point)
    double snap_to_node(double y) const;

private:
    friend std::shared_ptr<InnerEigenField>
    inner_solve(const SpectralContext&, double);
    double nu_ = 0, lambda_ = 0, y0_ = 0, y_end_ = 0, a2_ = 0, a4_ = 0;
    HermiteTable table_;   // t = ln y
};

/// Outer solution, normalized to 1 at the light cone, exposed on
/// [delta0/2, 1] in the self-similar variable.
class OuterEigenField final : public RadialField {
public:
    FieldSample eval(double rho) const override;
    RadialVar variable() const override { return RadialVar::self_similar_rho; }

    // light-cone variable access, z = 1 - rho^2 in [0, 1-(delta0/2)^2]
    FieldSample eval_z(double z) const;
    // evaluation with the distance to the light cone supplied exactly
    FieldSample eval_rho(double rho, double one_minus_rho) const;

private:
    friend std::shared_ptr<OuterEigenField>
    outer_solve(const SpectralContext&, double);
    double nu_ = 0, lambda_ = 0, z1_ = 0, z_end_ = 0;
    double taylor_[7] = {0, 0, 0, 0, 0, 0, 0};
    HermiteTable table_;   // coordinate = z
};

std::shared_ptr<InnerEigenField> inner_solve(const SpectralContext& ctx,
                                             double lambda);
std::shared_ptr<OuterEigenField> outer_solve(const SpectralContext& ctx,
                                             double lambda);

// Phi = phi_inn'(d0) - (phi_out'(d0)/phi_out(d0)) phi_inn(d0), all in rho.
double matching_defect(const SpectralContext& ctx, double lambda);

// finite-difference slope of the defect in lambda
double matching_slope(const SpectralContext& ctx, double lambda);

// Secant iteration on the matching defect seeded at lambda_hat.
EigenPair find_eigenpair(const SpectralContext& ctx, int j);

/// Glued eigenfunction: inner branch below delta0, c_match times the outer
/// branch above.  Second derivatives come from the eigenvalue ODE itself,
/// so the field qualifies as closed-form for operator application.
class Eigenfunction final : public RadialField {
public:
    Eigenfunction(const SpectralContext& ctx, const EigenPair& pair);

    FieldSample eval(double rho) const override;
    RadialVar variable() const override { return RadialVar::self_similar_rho; }
    bool has_second_derivative() const override { return true; }
    double second_derivative(double rho) const override;

    const EigenPair& pair() const { return pair_; }
    const SpectralContext& context() const { return ctx_; }
    // value and derivative of each branch at the gluing radius
    FieldSample inner_at_delta0() const;
    FieldSample outer_scaled_at_delta0() const;
    // nearest inner-table node to y (see InnerEigenField::snap_to_node)
    double inner_node(double y) const;

private:
    SpectralContext ctx_;
    EigenPair pair_;
    std::shared_ptr<InnerEigenField> inner_;
    std::shared_ptr<OuterEigenField> outer_;
    double glue_ = 0.0;
};

std::shared_ptr<Eigenfunction> eigenfunction(const SpectralContext& ctx,
                                             const EigenPair& pair);

// Residual of the matched-asymptotics ansatz.  `sup_ratio` maximizes
// |phi_j - ansatz| / (nu^2 rho <log(rho/nu)>^2) over a log grid of
// rho in [nu, 1]; `at` returns the raw residual at one point.
struct AnsatzResidual {
    double sup_ratio;
    double at_delta0;
};
AnsatzResidual ansatz_residual(const SpectralContext& ctx,
                               const Eigenfunction& phi);
double ansatz_residual_at(const SpectralContext& ctx, const Eigenfunction& phi,
                          double rho);

} // namespace wmb

#endif
