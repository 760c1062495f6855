#include "wmb/ode.hpp"

#include <cmath>
#include <stdexcept>

namespace wmb {

// Hairer's DOP853 tableau.
namespace dp853 {
constexpr double c2 = 0.526001519587677318785587544488e-01,
    c3 = 0.789002279381515978178381316732e-01,
    c4 = 0.118350341907227396726757197510e+00,
    c5 = 0.281649658092772603273242802490e+00,
    c6 = 0.333333333333333333333333333333e+00,
    c7 = 0.25e+00,
    c8 = 0.307692307692307692307692307692e+00,
    c9 = 0.651282051282051282051282051282e+00,
    c10 = 0.6e+00,
    c11 = 0.857142857142857142857142857142e+00;

constexpr double b1 = 5.42937341165687622380535766363e-2,
    b6 = 4.45031289275240888144113950566e0,
    b7 = 1.89151789931450038304281599044e0,
    b8 = -5.8012039600105847814672114227e0,
    b9 = 3.1116436695781989440891606237e-1,
    b10 = -1.52160949662516078556178806805e-1,
    b11 = 2.01365400804030348374776537501e-1,
    b12 = 4.47106157277725905176885569043e-2;

constexpr double a21 = 5.26001519587677318785587544488e-2,
    a31 = 1.97250569845378994544595329183e-2,
    a32 = 5.91751709536136983633785987549e-2,
    a41 = 2.95875854768068491816892993775e-2,
    a43 = 8.87627564304205475450678981324e-2,
    a51 = 2.41365134159266685502369798665e-1,
    a53 = -8.84549479328286085344864962717e-1,
    a54 = 9.24834003261792003115737966543e-1,
    a61 = 3.7037037037037037037037037037e-2,
    a64 = 1.70828608729473871279604482173e-1,
    a65 = 1.25467687566822425016691814123e-1,
    a71 = 3.7109375e-2,
    a74 = 1.70252211019544039314978060272e-1,
    a75 = 6.02165389804559606850219397283e-2,
    a76 = -1.7578125e-2,
    a81 = 3.70920001185047927108779319836e-2,
    a84 = 1.70383925712239993810214054705e-1,
    a85 = 1.07262030446373284651809199168e-1,
    a86 = -1.53194377486244017527936158236e-2,
    a87 = 8.27378916381402288758473766002e-3,
    a91 = 6.24110958716075717114429577812e-1,
    a94 = -3.36089262944694129406857109825e0,
    a95 = -8.68219346841726006818189891453e-1,
    a96 = 2.75920996994467083049415600797e1,
    a97 = 2.01540675504778934086186788979e1,
    a98 = -4.34898841810699588477366255144e1,
    a101 = 4.77662536438264365890433908527e-1,
    a104 = -2.48811461997166764192642586468e0,
    a105 = -5.90290826836842996371446475743e-1,
    a106 = 2.12300514481811942347288949897e1,
    a107 = 1.52792336328824235832596922938e1,
    a108 = -3.32882109689848629194453265587e1,
    a109 = -2.03312017085086261358222928593e-2,
    a111 = -9.3714243008598732571704021658e-1,
    a114 = 5.18637242884406370830023853209e0,
    a115 = 1.09143734899672957818500254654e0,
    a116 = -8.14978701074692612513997267357e0,
    a117 = -1.85200656599969598641566180701e1,
    a118 = 2.27394870993505042818970056734e1,
    a119 = 2.49360555267965238987089396762e0,
    a1110 = -3.0467644718982195003823669022e0,
    a121 = 2.27331014751653820792359768449e0,
    a124 = -1.05344954667372501984066689879e1,
    a125 = -2.00087205822486249909675718444e0,
    a126 = -1.79589318631187989172765950534e1,
    a127 = 2.79488845294199600508499808837e1,
    a128 = -2.85899827713502369474065508674e0,
    a129 = -8.87285693353062954433549289258e0,
    a1210 = 1.23605671757943030647266201528e1,
    a1211 = 6.43392746015763530355970484046e-1;

constexpr double bhh1 = 0.244094488188976377952755905512e+00,
    bhh2 = 0.733846688281611857341361741547e+00,
    bhh3 = 0.220588235294117647058823529412e-01;

constexpr double er1 = 0.1312004499419488073250102996e-01,
    er6 = -0.1225156446376204440720569753e+01,
    er7 = -0.4957589496572501915214079952e+00,
    er8 = 0.1664377182454986536961530415e+01,
    er9 = -0.3503288487499736816886487290e+00,
    er10 = 0.3341791187130174790297318841e+00,
    er11 = 0.8192320648511571246570742613e-01,
    er12 = -0.2235530786388629525884427845e-01;
} // namespace dp853

Dop853::Dop853(int dim, OdeRhs rhs, OdeOptions opt)
    : n_(dim), rhs_(std::move(rhs)), opt_(opt) {
    if (dim < 1 || dim > 4) throw std::invalid_argument("Dop853: dim must be 1..4");
}

void Dop853::stages(double t, const double* y, double h, double* y8,
                    double* err5, double* err3) {
    using namespace dp853;
    auto& k = k_;
    double* yt = yt_.data();
    const int n = n_;

    rhs_(t, y, k[0].data());
    for (int i = 0; i < n; i++) yt[i] = y[i] + h * a21 * k[0][i];
    rhs_(t + c2 * h, yt, k[1].data());
    for (int i = 0; i < n; i++) yt[i] = y[i] + h * (a31 * k[0][i] + a32 * k[1][i]);
    rhs_(t + c3 * h, yt, k[2].data());
    for (int i = 0; i < n; i++) yt[i] = y[i] + h * (a41 * k[0][i] + a43 * k[2][i]);
    rhs_(t + c4 * h, yt, k[3].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a51 * k[0][i] + a53 * k[2][i] + a54 * k[3][i]);
    rhs_(t + c5 * h, yt, k[4].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a61 * k[0][i] + a64 * k[3][i] + a65 * k[4][i]);
    rhs_(t + c6 * h, yt, k[5].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a71 * k[0][i] + a74 * k[3][i] + a75 * k[4][i] + a76 * k[5][i]);
    rhs_(t + c7 * h, yt, k[6].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a81 * k[0][i] + a84 * k[3][i] + a85 * k[4][i] +
                            a86 * k[5][i] + a87 * k[6][i]);
    rhs_(t + c8 * h, yt, k[7].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a91 * k[0][i] + a94 * k[3][i] + a95 * k[4][i] +
                            a96 * k[5][i] + a97 * k[6][i] + a98 * k[7][i]);
    rhs_(t + c9 * h, yt, k[8].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a101 * k[0][i] + a104 * k[3][i] + a105 * k[4][i] +
                            a106 * k[5][i] + a107 * k[6][i] + a108 * k[7][i] +
                            a109 * k[8][i]);
    rhs_(t + c10 * h, yt, k[9].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a111 * k[0][i] + a114 * k[3][i] + a115 * k[4][i] +
                            a116 * k[5][i] + a117 * k[6][i] + a118 * k[7][i] +
                            a119 * k[8][i] + a1110 * k[9][i]);
    rhs_(t + c11 * h, yt, k[10].data());
    for (int i = 0; i < n; i++)
        yt[i] = y[i] + h * (a121 * k[0][i] + a124 * k[3][i] + a125 * k[4][i] +
                            a126 * k[5][i] + a127 * k[6][i] + a128 * k[7][i] +
                            a129 * k[8][i] + a1210 * k[9][i] + a1211 * k[10][i]);
    rhs_(t + h, yt, k[11].data());

    for (int i = 0; i < n; i++) {
        const double s = b1 * k[0][i] + b6 * k[5][i] + b7 * k[6][i] +
                         b8 * k[7][i] + b9 * k[8][i] + b10 * k[9][i] +
                         b11 * k[10][i] + b12 * k[11][i];
        y8[i] = y[i] + h * s;
        err3[i] = s - bhh1 * k[0][i] - bhh2 * k[8][i] - bhh3 * k[11][i];
        err5[i] = er1 * k[0][i] + er6 * k[5][i] + er7 * k[6][i] +
                  er8 * k[7][i] + er9 * k[8][i] + er10 * k[9][i] +
                  er11 * k[10][i] + er12 * k[11][i];
    }
}

double Dop853::initial_step(double t0, const double* y, double dir,
                            double t_span) const {
    std::array<double, 4> f0{}, y1{}, f1{};
    rhs_(t0, y, f0.data());
    double dn0 = 0, dn1 = 0;
    for (int i = 0; i < n_; i++) {
        const double sk = opt_.abs_tol + opt_.rel_tol * std::fabs(y[i]);
        dn0 += (y[i] / sk) * (y[i] / sk);
        dn1 += (f0[i] / sk) * (f0[i] / sk);
    }
    double h = (dn0 < 1e-10 || dn1 < 1e-10) ? 1e-6 : 0.01 * std::sqrt(dn0 / dn1);
    h = std::min(h, t_span);
    for (int i = 0; i < n_; i++) y1[i] = y[i] + dir * h * f0[i];
    rhs_(t0 + dir * h, y1.data(), f1.data());
    double d2 = 0;
    for (int i = 0; i < n_; i++) {
        const double sk = opt_.abs_tol + opt_.rel_tol * std::fabs(y[i]);
        d2 += ((f1[i] - f0[i]) / sk) * ((f1[i] - f0[i]) / sk);
    }
    d2 = std::sqrt(d2) / h;
    const double dmax = std::max(std::sqrt(dn1), d2);
    double h1 = (dmax <= 1e-15) ? std::max(1e-6, h * 1e-3)
                                : std::pow(0.01 / dmax, 1.0 / 8.0);
    return std::min({100.0 * h, h1, t_span}) * dir;
}

void Dop853::integrate(double t0, double t1, double* y,
                       const std::vector<double>& outputs,
                       const OdeObserver& observer) {
    if (t1 == t0) return;
    const double dir = (t1 > t0) ? 1.0 : -1.0;
    const double span = std::fabs(t1 - t0);
    const double hmax = opt_.max_step > 0 ? opt_.max_step : span;

    double t = t0;
    double h = opt_.initial_step != 0
                   ? dir * std::fabs(opt_.initial_step)
                   : initial_step(t0, y, dir, span);

    std::size_t next_out = 0;
    auto next_target = [&]() {
        return next_out < outputs.size() ? outputs[next_out] : t1;
    };

    double y8[4], err5[4], err3[4];
    double facold = 1e-4;
    const double beta = 0.0, expo1 = 1.0 / 8.0 - beta * 0.2;
    const double safe = 0.9, facc1 = 1.0 / 0.333, facc2 = 1.0 / 6.0;

    for (std::size_t step = 0; step < opt_.max_steps; step++) {
        if (std::fabs(h) < 1e-14 * std::max(1.0, std::fabs(t)))
            throw std::runtime_error("Dop853: step size underflow at t=" +
                                     std::to_string(t));
        bool hit_output = false;
        double target = next_target();
        if ((t + h - target) * dir > 0.0) {
            h = target - t;
            hit_output = true;
        }

        stages(t, y, h, y8, err5, err3);

        // combined 5th/3rd-order error estimate (Hairer)
        double e5 = 0, e3 = 0;
        for (int i = 0; i < n_; i++) {
            const double sk = opt_.abs_tol +
                opt_.rel_tol * std::max(std::fabs(y[i]), std::fabs(y8[i]));
            e5 += (err5[i] / sk) * (err5[i] / sk);
            e3 += (err3[i] / sk) * (err3[i] / sk);
        }
        double deno = e5 + 0.01 * e3;
        if (deno <= 0.0) deno = 1.0;
        const double err = std::fabs(h) * e5 * std::sqrt(1.0 / (n_ * deno));

        const double fac11 = std::pow(err, expo1);
        double fac = fac11 / std::pow(facold, beta);
        fac = std::max(facc2, std::min(facc1, fac / safe));
        double hnew = h / fac;

        if (err <= 1.0) {
            facold = std::max(err, 1e-4);
            t += h;
            for (int i = 0; i < n_; i++) y[i] = y8[i];

            bool more = true;
            if (hit_output) {
                if (observer) more = observer(t, y);
                next_out++;
            } else if (outputs.empty() && observer) {
                more = observer(t, y);
            }
            if (!more) return;
            if ((t - t1) * dir >= 0.0 && next_out >= outputs.size()) return;

            if (std::fabs(hnew) > hmax) hnew = dir * hmax;
            h = dir * std::fabs(hnew);
        } else {
            h = h / std::min(facc1, fac11 / safe);
        }
    }
    throw std::runtime_error("Dop853: max step count exceeded");
}

} // namespace wmb
