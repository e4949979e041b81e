#include "casimir/numerics.hpp"

#include <cmath>

namespace casimir::num {

SumResult matsubara_sum(const Integrand& f, double temperature, const SumSpec& spec) {
    if (!(temperature > 0.0))
        throw std::invalid_argument("matsubara_sum: temperature must be > 0");

    const double two_pi_t = 2.0 * M_PI * temperature;

    double sum = temperature * f(0.0);
    if (!std::isfinite(sum))
        throw NonConvergence("matsubara_sum: non-finite m=0 term", sum, INFINITY);

    double prev_term = 0.0;
    double term = 0.0;
    int consecutive_small = 0;
    int m = 0;

    while (true) {
        ++m;
        if (m > spec.max_index)
            throw NonConvergence("matsubara_sum: index budget exhausted without decay",
                                 sum, std::abs(term));
        prev_term = term;
        term = 2.0 * temperature * f(two_pi_t * m);
        if (!std::isfinite(term))
            throw NonConvergence("matsubara_sum: non-finite term", sum, INFINITY);
        sum += term;
        const double floor = std::max(std::abs(sum), 1e-300);
        if (std::abs(term) <= spec.rel_tol * floor)
            ++consecutive_small;
        else
            consecutive_small = 0;
        if (consecutive_small >= 3 && m >= spec.min_terms) break;
    }

    // Geometric tail extrapolation from the last two terms.
    double tail = 0.0;
    if (prev_term != 0.0) {
        const double r = term / prev_term;
        if (r > 0.0 && r < 1.0) tail = term * r / (1.0 - r);
    }
    return {sum + tail, std::abs(tail) + std::abs(term) * spec.rel_tol, m};
}

}  // namespace casimir::num
