// Radial fields: scalar functions of a radial coordinate exposing value and
// first derivative, tagged with the variable they live in.  Closed-form
// fields may carry a hand-coded second derivative, which the state-pair
// operator application requires.

#ifndef WMB_RADIAL_HPP
#define WMB_RADIAL_HPP

#include <functional>
#include <memory>
#include <stdexcept>
#include <utility>
#include <vector>

namespace wmb {

enum class RadialVar { inner_y, self_similar_rho };

struct FieldSample {
    double value;
    double deriv;
};

class RadialField {
public:
    virtual ~RadialField() = default;
    virtual FieldSample eval(double r) const = 0;
    // value without forcing a derivative evaluation
    virtual double value_only(double r) const { return eval(r).value; }
    virtual RadialVar variable() const = 0;
    virtual bool has_second_derivative() const { return false; }
    virtual double second_derivative(double) const {
        throw std::logic_error("RadialField: no second derivative available");
    }
};

/// Field given by closed-form callables.
class ClosedFormField final : public RadialField {
public:
    using Fn = std::function<double(double)>;
    ClosedFormField(RadialVar var, Fn value, Fn deriv, Fn second = nullptr)
        : var_(var), v_(std::move(value)), d1_(std::move(deriv)),
          d2_(std::move(second)) {}

    FieldSample eval(double r) const override { return {v_(r), d1_(r)}; }
    double value_only(double r) const override { return v_(r); }
    RadialVar variable() const override { return var_; }
    bool has_second_derivative() const override { return d2_ != nullptr; }
    double second_derivative(double r) const override {
        if (!d2_) throw std::logic_error("ClosedFormField: no second derivative");
        return d2_(r);
    }

private:
    RadialVar var_;
    Fn v_, d1_, d2_;
};

/// Cubic Hermite interpolant on a uniform grid in a transformed coordinate
/// t = T(r) (identity or log).  Nodes store the value and dV/dt, so the
/// interpolant reproduces exact derivatives at the nodes.
class HermiteTable {
public:
    HermiteTable() = default;
    HermiteTable(double t0, double dt, std::vector<double> values,
                 std::vector<double> dvalues_dt)
        : t0_(t0), dt_(dt), v_(std::move(values)), g_(std::move(dvalues_dt)) {}

    bool empty() const { return v_.empty(); }
    double t_min() const { return t0_; }
    double t_max() const { return t0_ + dt_ * (static_cast<double>(v_.size()) - 1.0); }
    double dt() const { return dt_; }

    // value and d/dt at t
    FieldSample eval_t(double t) const;

private:
    double t0_ = 0.0, dt_ = 1.0;
    std::vector<double> v_, g_;
};

/// Field interpolated on a log-spaced grid (t = ln r).
class LogGridField final : public RadialField {
public:
    LogGridField(RadialVar var, HermiteTable table)
        : var_(var), table_(std::move(table)) {}

    FieldSample eval(double r) const override;
    RadialVar variable() const override { return var_; }

private:
    RadialVar var_;
    HermiteTable table_;
};

/// First-order-formulation state (eps, eps_dot) in the self-similar
/// variable.  closed_form marks states whose components carry hand-coded
/// second (eps) and first (eps_dot) derivatives suitable for operator
/// application.
struct StatePair {
    std::shared_ptr<const RadialField> eps;
    std::shared_ptr<const RadialField> eps_dot;
    bool closed_form = false;
};

} // namespace wmb

#endif
