#include "wmb/quad.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace wmb {

// QUADPACK 15-point Kronrod nodes and weights with the embedded 7-point
// Gauss weights.
namespace gk15 {
constexpr double xgk[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double wgk[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double wg[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};
} // namespace gk15

namespace {

struct Panel {
    double a, b;
    int depth;
};

void gk15_panel(const std::function<double(double)>& f, double a, double b,
                double& kronrod, double& err, double& resabs) {
    using namespace gk15;
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0, rabs = 0.0;
    for (int j = 0; j < 8; j++) {
        const double dx = hw * xgk[j];
        double fsum, fabs_sum;
        if (j == 7) {
            const double v = f(c);
            fsum = v;
            fabs_sum = std::fabs(v);
        } else {
            const double lo = f(c - dx), hi = f(c + dx);
            fsum = lo + hi;
            fabs_sum = std::fabs(lo) + std::fabs(hi);
        }
        resk += wgk[j] * fsum;
        rabs += wgk[j] * fabs_sum;
        if (j % 2 == 1) resg += wg[j / 2] * fsum;
        else if (j == 7) resg += wg[3] * fsum;
    }
    kronrod = resk * hw;
    err = std::fabs((resk - resg) * hw);
    resabs = rabs * std::fabs(hw);
}

} // namespace

double integrate_gk(const std::function<double(double)>& f, double a, double b,
                    double abs_tol, double rel_tol, int max_depth) {
    if (a == b) return 0.0;

    struct QPanel {
        double a, b, val, err, resabs;
        int depth;
        bool operator<(const QPanel& o) const { return err < o.err; }
    };
    auto make = [&](double pa, double pb, int depth) {
        QPanel p{pa, pb, 0, 0, 0, depth};
        gk15_panel(f, pa, pb, p.val, p.err, p.resabs);
        return p;
    };

    // worst-panel-first refinement against a global error budget; the
    // 5e-16 resabs floor keeps cancelling integrands from spiralling
    std::vector<QPanel> heap{make(a, b, 0)};
    double sum_val = heap[0].val, sum_err = heap[0].err,
           sum_abs = heap[0].resabs;

    for (std::size_t splits = 0; splits < 4000; splits++) {
        const double target = std::max(
            {abs_tol, rel_tol * std::fabs(sum_val), 5e-16 * sum_abs});
        if (sum_err <= target) return sum_val;

        std::pop_heap(heap.begin(), heap.end());
        const QPanel worst = heap.back();
        const double m = 0.5 * (worst.a + worst.b);
        if (worst.depth >= max_depth || m == worst.a || m == worst.b) {
            // cannot refine further; the global floor decides below
            break;
        }
        heap.pop_back();
        sum_val -= worst.val;
        sum_err -= worst.err;
        sum_abs -= worst.resabs;
        for (const QPanel& half : {make(worst.a, m, worst.depth + 1),
                                   make(m, worst.b, worst.depth + 1)}) {
            sum_val += half.val;
            sum_err += half.err;
            sum_abs += half.resabs;
            heap.push_back(half);
            std::push_heap(heap.begin(), heap.end());
        }
    }
    const double target = std::max(
        {abs_tol, rel_tol * std::fabs(sum_val), 5e-16 * sum_abs});
    if (sum_err <= 100.0 * target) return sum_val;
    throw std::runtime_error("integrate_gk: panel budget exhausted");
}

std::array<double, 6> integrate_gk6(const VecIntegrand<6>& f, double a,
                                    double b, double abs_tol, double rel_tol) {
    using namespace gk15;
    struct VPanel {
        double a, b;
        int depth;
    };
    std::array<double, 6> total{};
    if (a == b) return total;
    std::vector<VPanel> stack{{a, b, 0}};
    std::size_t panels = 0;
    while (!stack.empty()) {
        if (++panels > 200000)
            throw std::runtime_error("integrate_gk6: panel budget exhausted");
        VPanel p = stack.back();
        stack.pop_back();
        const double c = 0.5 * (p.a + p.b), hw = 0.5 * (p.b - p.a);
        std::array<double, 6> resk{}, resg{};
        for (int j = 0; j < 8; j++) {
            const double dx = hw * xgk[j];
            std::array<double, 6> fsum{};
            if (j == 7) {
                fsum = f(c);
            } else {
                const auto lo = f(c - dx), hi = f(c + dx);
                for (int i = 0; i < 6; i++) fsum[i] = lo[i] + hi[i];
            }
            for (int i = 0; i < 6; i++) {
                resk[i] += wgk[j] * fsum[i];
                if (j % 2 == 1) resg[i] += wg[j / 2] * fsum[i];
                else if (j == 7) resg[i] += wg[3] * fsum[i];
            }
        }
        double err = 0.0, scale = 0.0;
        for (int i = 0; i < 6; i++) {
            err = std::max(err, std::fabs((resk[i] - resg[i]) * hw));
            scale = std::max(scale, std::fabs(resk[i] * hw));
        }
        const double tol = std::max(abs_tol * (p.b - p.a) / (b - a),
                                    rel_tol * scale);
        if (err <= tol || p.depth >= 48) {
            for (int i = 0; i < 6; i++) total[i] += resk[i] * hw;
        } else {
            const double m = 0.5 * (p.a + p.b);
            stack.push_back({p.a, m, p.depth + 1});
            stack.push_back({m, p.b, p.depth + 1});
        }
    }
    return total;
}

double integrate_tanh_sinh(const std::function<double(double, double)>& f,
                           double a, double b, double abs_tol, double rel_tol,
                           int max_level) {
    const double hw = 0.5 * (b - a);
    const double t_max = 4.0;   // weight ~ 1e-37 beyond

    // contribution of the node pair at |t|, using 1-tanh(u) = 2/(e^{2u}+1)
    auto pair_sum = [&](double t) {
        const double u = 0.5 * M_PI * std::sinh(t);
        const double ch = std::cosh(u);
        const double w = 0.5 * M_PI * std::cosh(t) / (ch * ch);
        const double tail = 2.0 / (std::exp(2.0 * u) + 1.0); // = 1 - tanh(u)
        const double x_hi = b - hw * tail;                   // node near b
        const double x_lo = a + hw * tail;                   // mirror node
        double s = f(x_hi, hw * tail);
        if (t > 0.0) s += f(x_lo, (b - a) - hw * tail);
        return w * s;
    };

    double h = 1.0;
    double sum = pair_sum(0.0);
    for (double t = h; t <= t_max; t += h) sum += pair_sum(t);
    double prev = hw * h * sum;

    for (int level = 1; level <= max_level; level++) {
        h *= 0.5;
        for (double t = h; t <= t_max; t += 2.0 * h) sum += pair_sum(t);
        const double cur = hw * h * sum;
        if (level >= 2 &&
            std::fabs(cur - prev) <= abs_tol + rel_tol * std::fabs(cur))
            return cur;
        prev = cur;
    }
    return prev;
}

} // namespace wmb
