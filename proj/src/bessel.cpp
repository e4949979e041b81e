#include "casimir/bessel.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace casimir::spherical {

namespace {

constexpr double kRenormAt = 1e250;
constexpr double kRenormFactor = 1e-250;
const double kRenormLog = std::log(1e250);

double log_double_factorial_odd(int l) {
    // ln (2l+1)!! = lgamma(2l+2) - l ln 2 - lgamma(l+1)
    return std::lgamma(2.0 * l + 2.0) - l * M_LN2 - std::lgamma(l + 1.0);
}

// Ascending series of i_l. Every term is positive, so there is no
// cancellation at any argument; the running sum is renormalized to keep
// large arguments (terms peak near e^{2x}) inside double range.
Scaled series_i(int l, double x) {
    double log_scale = l * std::log(x) - log_double_factorial_odd(l);
    double sum = 1.0, term = 1.0;
    const double x2 = x * x;
    const int max_terms = 4000 + static_cast<int>(2.0 * x);
    for (int k = 1; k < max_terms; ++k) {
        term *= x2 / (2.0 * k * (2.0 * l + 2.0 * k + 1.0));
        sum += term;
        if (term < sum * 1e-18) break;
        if (sum > kRenormAt) {
            sum *= kRenormFactor;
            term *= kRenormFactor;
            log_scale += kRenormLog;
        }
    }
    return Scaled{sum, log_scale}.normalized();
}

BesselValue combine_with_derivative(const Scaled& f_l, const Scaled& f_below, int l, double x,
                                    bool is_k) {
    // i'_l = i_{l-1} - ((l+1)/x) i_l ;  k'_l = -k_{l-1} - ((l+1)/x) k_l
    // and at l = 0 the "below" slot carries order 1: i'_0 = i_1, k'_0 = -k_1.
    BesselValue out;
    const Scaled base = f_l.normalized();
    out.value = base.mantissa;
    out.log_scale = base.log_scale;
    const double aligned_below = f_below.mantissa * std::exp(f_below.log_scale - base.log_scale);
    if (l == 0)
        out.derivative = is_k ? -aligned_below : aligned_below;
    else
        out.derivative = (is_k ? -aligned_below : aligned_below) -
                         ((l + 1.0) / x) * base.mantissa;
    return out;
}

BesselValue evaluate_k(int l, double x) {
    // Upward recurrence from the closed forms of order 0 and 1; stable,
    // mantissas renormalized as they grow.
    double log_scale = -x;
    double k_prev = M_PI / (2.0 * x);        // order 0
    double k_cur = k_prev * (1.0 + 1.0 / x); // order 1
    if (l == 0) {
        BesselValue out;
        out.value = k_prev;
        out.derivative = -k_cur;
        out.log_scale = log_scale;
        return out;
    }
    for (int n = 1; n < l; ++n) {
        const double k_next = k_prev + ((2.0 * n + 1.0) / x) * k_cur;
        k_prev = k_cur;
        k_cur = k_next;
        if (std::abs(k_cur) > kRenormAt) {
            k_cur *= kRenormFactor;
            k_prev *= kRenormFactor;
            log_scale += kRenormLog;
        }
    }
    return combine_with_derivative(Scaled{k_cur, log_scale}, Scaled{k_prev, log_scale}, l, x,
                                   true);
}

BesselValue evaluate_i(int l, double x) {
    const Scaled f_l = series_i(l, x);
    const Scaled f_b = series_i(l == 0 ? 1 : l - 1, x);
    return combine_with_derivative(f_l, f_b, l, x, false);
}

}  // namespace

double wronskian_residual(const BesselPair& pair, double x) {
    const Scaled w = pair.i.val() * pair.k.deriv() - pair.i.deriv() * pair.k.val();
    const double target = -M_PI / (2.0 * x * x);
    return std::abs((w.value() - target) / target);
}

BesselPair modified_sph_bessel(int l, double x) {
    if (l < 0) throw std::invalid_argument("modified_sph_bessel: order must be >= 0");
    if (!(x > 0.0)) throw std::invalid_argument("modified_sph_bessel: argument must be > 0");

    BesselPair pair;
    pair.k = evaluate_k(l, x);
    pair.i = evaluate_i(l, x);
    if (std::isfinite(pair.i.value) && std::isfinite(pair.k.value) &&
        wronskian_residual(pair, x) < 1e-12)
        return pair;
    throw std::range_error("modified_sph_bessel: no stable value at l = " + std::to_string(l) +
                           ", x = " + std::to_string(x));
}

}  // namespace casimir::spherical
