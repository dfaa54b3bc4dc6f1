// Bivariate normal probabilities after A. Genz, "Numerical computation of rectangular bivariate
// and trivariate normal and t probabilities", Statistics and Computing 14 (2004).
#include <algorithm>
#include <cmath>
#include <limits>

#include "adhesion/fields.hpp"

namespace adhesion {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

namespace {

// P(X > dh, Y > dk)
double bvnu(double dh, double dk, double r) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (dh == inf || dk == inf) return 0.0;
    if (dh == -inf) return dk == -inf ? 1.0 : norm_cdf(-dk);
    if (dk == -inf) return norm_cdf(-dh);
    if (r == 0.0) return norm_cdf(-dh) * norm_cdf(-dk);

    static const double w6[3] = {0.1713244923791705, 0.3607615730481384, 0.4679139345726904};
    static const double x6[3] = {0.9324695142031522, 0.6612093864662647, 0.2386191860831970};
    static const double w12[6] = {0.04717533638651177, 0.1069393259953183, 0.1600783285433464,
                                  0.2031674267230659,  0.2334925365383547, 0.2491470458134029};
    static const double x12[6] = {0.9815606342467191, 0.9041172563704750, 0.7699026741943050,
                                  0.5873179542866171, 0.3678314989981802, 0.1252334085114692};
    static const double w20[10] = {0.01761400713915212, 0.04060142980038694, 0.06267204833410906,
                                   0.08327674157670475, 0.1019301198172404,  0.1181945319615184,
                                   0.1316886384491766,  0.1420961093183821,  0.1491729864726037,
                                   0.1527533871307259};
    static const double x20[10] = {0.9931285991850949, 0.9639719272779138, 0.9122344282513259,
                                   0.8391169718222188, 0.7463319064601508, 0.6360536807265150,
                                   0.5108670019508271, 0.3737060887154196, 0.2277858511416451,
                                   0.07652652113349733};
    const double* w;
    const double* xg;
    int lg;
    double ar = std::abs(r);
    if (ar < 0.3) { w = w6; xg = x6; lg = 3; }
    else if (ar < 0.75) { w = w12; xg = x12; lg = 6; }
    else { w = w20; xg = x20; lg = 10; }

    const double tp = 2.0 * M_PI;
    double h = dh, k = dk, hk = h * k, bvn = 0.0;
    if (ar < 0.925) {
        double hs = 0.5 * (h * h + k * k);
        double asr = 0.5 * std::asin(r);
        for (int i = 0; i < lg; ++i) {
            for (int sgn : {-1, 1}) {
                double sn = std::sin(asr * (1.0 + sgn * xg[i]));
                bvn += w[i] * std::exp((sn * hk - hs) / (1.0 - sn * sn));
            }
        }
        return std::clamp(bvn * asr / tp + norm_cdf(-h) * norm_cdf(-k), 0.0, 1.0);
    }
    if (r < 0) { k = -k; hk = -hk; }
    if (ar < 1.0) {
        double as = 1.0 - r * r;
        double a = std::sqrt(as);
        double bs = (h - k) * (h - k);
        double c = (4.0 - hk) / 8.0;
        double d = (12.0 - hk) / 80.0;
        double asr = -0.5 * (bs / as + hk);
        if (asr > -100.0) bvn = a * std::exp(asr) * (1.0 - c * (bs - as) * (1.0 - d * bs) / 3.0 + c * d * as * as);
        if (hk > -100.0) {
            double b = std::sqrt(bs);
            double sp = std::sqrt(tp) * norm_cdf(-b / a);
            bvn -= std::exp(-0.5 * hk) * sp * b * (1.0 - c * bs * (1.0 - d * bs) / 3.0);
        }
        a *= 0.5;
        double acc = 0.0;
        for (int i = 0; i < lg; ++i) {
            for (int sgn : {-1, 1}) {
                double xs = a * (1.0 + sgn * xg[i]);
                xs *= xs;
                double asr2 = -0.5 * (bs / xs + hk);
                if (asr2 <= -100.0) continue;
                double sp = 1.0 + c * xs * (1.0 + 5.0 * d * xs);
                double rs = std::sqrt(1.0 - xs);
                double ep = std::exp(-0.5 * hk * xs / ((1.0 + rs) * (1.0 + rs))) / rs;
                acc += w[i] * std::exp(asr2) * (sp - ep);
            }
        }
        bvn = (a * acc - bvn) / tp;
    }
    if (r > 0) {
        bvn += norm_cdf(-std::max(h, k));
    } else if (h >= k) {
        bvn = -bvn;
    } else {
        double L = h < 0 ? norm_cdf(k) - norm_cdf(h) : norm_cdf(-h) - norm_cdf(-k);
        bvn = L - bvn;
    }
    return std::clamp(bvn, 0.0, 1.0);
}

}  // namespace

double bvn_cdf(double h, double k, double r) { return bvnu(-h, -k, r); }

}  // namespace adhesion
