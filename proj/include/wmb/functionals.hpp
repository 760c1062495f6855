// Invariant linear functionals: the light-cone weight g_j, application of
// the first-order-system operator to closed-form states, the pairings
// ell_j, and the modulation constants frkb_j, frkc_j together with their
// digamma closed-form cross-checks.

#ifndef WMB_FUNCTIONALS_HPP
#define WMB_FUNCTIONALS_HPP

#include <array>
#include <memory>

#include "wmb/eigensolver.hpp"
#include "wmb/radial.hpp"

namespace wmb {

// w_j(rho) = (1 - rho^2)^{lambda_j - 1/2} on (0, 1], zero beyond the light
// cone.  Requires lambda_j >= -0.45 so the weight stays integrable.
double weight_g(double lambda_j, double rho);

// M_nu applied to a closed-form state:
//   (eps, eps_dot) -> (-Lmb eps + eps_dot, -H_nu eps - Lmb0 eps_dot)
// with Lmb = rho d/drho and Lmb0 = rho d/drho + 1.  The input must carry
// second derivatives of eps and first derivatives of eps_dot; the output
// components expose value and first derivative only.
StatePair apply_m_nu(double nu, const StatePair& s);

struct QuadOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-10;
};

// ell_j(s) = < (lambda_j + Lmb0) eps + eps_dot, g_j phi_j >, integrated over
// (0,1] with panels [0,nu], [nu,1/2] and a tanh-sinh rule on [1/2,1] for the
// endpoint weight.
double ell(const Eigenfunction& phi_j, const StatePair& s,
           const QuadOptions& q = {});

// pairing < u, g_j phi_j > for a scalar field u
double pair_with_eigen(const Eigenfunction& phi_j, const RadialField& u,
                       const QuadOptions& q = {});

// ell_j(M_nu s) - lambda_j ell_j(s); exact invariance means this measures
// quadrature and eigen-solve error only
double invariance_defect(const Eigenfunction& phi_j, const StatePair& s,
                         const QuadOptions& q = {});

// the canonical closed-form test states
StatePair canonical_state_a();   // (rho e^{-rho^2}, 0)
StatePair canonical_state_b();   // (0, rho^2 (1 - rho^2))
StatePair canonical_state_c();   // (rho (1-rho^2)^2, rho e^{-rho})

// state ((1/nu) LmbQ_nu, 0) entering frkb
StatePair lambda_q_state(double nu);

// eigen-state bm{phi_k} = (phi_k, (lambda_k + Lmb) phi_k); closed-form via
// the eigenvalue ODE
StatePair eigen_state(const std::shared_ptr<const Eigenfunction>& phi_k);

struct CrosscheckResult {
    double quad_lambda_q;      // quadrature of <(1/nu)LmbQ_nu, g_j (1/nu)LmbQ_nu>
    double formula_lambda_q;   // 4|log nu| - 2 + 2(psi(1) - psi(lambda_j+1/2))
    double quad_scaling;       // quadrature of <(1/nu)Lmb0LmbQ_nu, g_j (1/nu)LmbQ_nu>
    double formula_scaling;    // 2
    double sub_integral;       // int_0^{1/nu} 4y^3/(1+y^2)^2 dy by quadrature
    double sub_integral_exact; // 2 log(1+1/nu^2) - 2/(1+nu^2)
};

/// Computes both eigenpairs for one nu and exposes every functional-level
/// quantity.  All evaluation is read-only after construction.
class FunctionalEngine {
public:
    explicit FunctionalEngine(const SpectralContext& ctx);

    const SpectralContext& context() const { return ctx_; }
    const EigenPair& pair(int j) const { return pairs_[check(j)]; }
    const std::shared_ptr<const Eigenfunction>& phi(int j) const {
        return phis_[check(j)];
    }

    double ell_state(int j, const StatePair& s) const;
    double ell_eigen(int j, int k) const;            // ell_j(bm phi_k)
    double invariance(int j, const StatePair& s) const;
    double frkb(int j) const;                         // ell_j((1/nu) bmLmbQ_nu)
    double frkc(int j) const;
    CrosscheckResult closed_form_crosschecks(int j) const;

    QuadOptions quad;

private:
    static int check(int j);
    SpectralContext ctx_;
    std::array<EigenPair, 2> pairs_;
    std::array<std::shared_ptr<const Eigenfunction>, 2> phis_;
};

} // namespace wmb

#endif
