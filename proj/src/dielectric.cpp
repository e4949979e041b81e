#include "casimir/dielectric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace casimir {

PolarizabilityModel PolarizabilityModel::plasma(double u_p) {
    if (!(u_p >= 0.0)) throw std::invalid_argument("plasma: u_p must be >= 0");
    PolarizabilityModel m;
    m.kind = ModelKind::plasma;
    m.plasma_frequency = u_p;
    return m;
}

PolarizabilityModel PolarizabilityModel::oscillator(double alpha_s, double u0) {
    // alpha_s = 3 would be a non-plasma metallic model; only plasma ships as
    // the metallic case, so the oscillator is restricted to alpha_s < 3.
    if (!(alpha_s >= 0.0 && alpha_s < 3.0))
        throw std::invalid_argument("oscillator: alpha_s must lie in [0, 3)");
    if (!(u0 > 0.0)) throw std::invalid_argument("oscillator: u0 must be > 0");
    PolarizabilityModel m;
    m.kind = ModelKind::oscillator;
    m.oscillator_static = alpha_s;
    m.oscillator_frequency = u0;
    return m;
}

PolarizabilityModel PolarizabilityModel::constant_eps(double eps) {
    if (!(eps >= 1.0)) throw std::invalid_argument("constant_eps: epsilon must be >= 1");
    PolarizabilityModel m;
    m.kind = ModelKind::constant_epsilon;
    m.epsilon_constant = eps;
    return m;
}

PolarizabilityModel PolarizabilityModel::tabulated(
    std::vector<std::pair<double, double>> samples) {
    if (samples.size() < 2) throw std::invalid_argument("tabulated: need at least 2 samples");
    if (!std::is_sorted(samples.begin(), samples.end(),
                        [](const auto& a, const auto& b) { return a.first < b.first; }))
        throw std::invalid_argument("tabulated: samples must be sorted in u");
    for (const auto& [u, a0] : samples) {
        if (!(u >= 0.0) || !(a0 >= 0.0) || a0 > 3.0)
            throw std::invalid_argument("tabulated: samples must have u >= 0, 0 <= alpha0 <= 3");
    }
    PolarizabilityModel m;
    m.kind = ModelKind::tabulated;
    m.table = std::move(samples);
    return m;
}

double eval_alpha0(const PolarizabilityModel& model, double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("eval_alpha0: u must be >= 0");
    switch (model.kind) {
        case ModelKind::plasma: {
            if (model.plasma_frequency == 0.0) return 0.0;
            if (u == 0.0) return 3.0;
            const double up2 = model.plasma_frequency * model.plasma_frequency;
            return up2 / (u * u + up2 / 3.0);
        }
        case ModelKind::oscillator: {
            const double u02 = model.oscillator_frequency * model.oscillator_frequency;
            return model.oscillator_static * u02 / (u02 + u * u);
        }
        case ModelKind::constant_epsilon:
            return inverse_lorentz_lorenz(model.epsilon_constant);
        case ModelKind::tabulated: {
            const auto& t = model.table;
            if (u < t.front().first || u > t.back().first)
                throw std::out_of_range("eval_alpha0: u outside tabulated range");
            auto hi = std::lower_bound(t.begin(), t.end(), u,
                                       [](const auto& s, double x) { return s.first < x; });
            if (hi == t.begin()) return hi->second;
            auto lo = hi - 1;
            if (hi == t.end()) return lo->second;
            const double w = (u - lo->first) / (hi->first - lo->first);
            return lo->second + w * (hi->second - lo->second);
        }
    }
    throw std::logic_error("eval_alpha0: unknown model kind");
}

DielectricResponse lorentz_lorenz(double alpha0) {
    if (!(alpha0 >= 0.0)) throw std::invalid_argument("lorentz_lorenz: alpha0 must be >= 0");
    if (alpha0 == 3.0) return DielectricResponse::metallic();
    if (alpha0 > 3.0) {
        // Tolerate representation roundoff of the metallic point itself.
        if (alpha0 < 3.0 * (1.0 + 8.0 * std::numeric_limits<double>::epsilon()))
            return DielectricResponse::metallic();
        throw std::invalid_argument("lorentz_lorenz: alpha0 > 3 is unphysical here");
    }
    return DielectricResponse::finite(1.0 + alpha0 / (1.0 - alpha0 / 3.0));
}

double inverse_lorentz_lorenz(double epsilon) {
    if (!(epsilon >= 1.0))
        throw std::invalid_argument("inverse_lorentz_lorenz: epsilon must be >= 1");
    if (std::isinf(epsilon)) return 3.0;
    return 3.0 * (epsilon - 1.0) / (epsilon + 2.0);
}

DielectricResponse eval_epsilon(const PolarizabilityModel& model, double u) {
    if (!(u >= 0.0)) throw std::invalid_argument("eval_epsilon: u must be >= 0");
    switch (model.kind) {
        case ModelKind::plasma: {
            if (model.plasma_frequency == 0.0) return DielectricResponse::finite(1.0);
            if (u == 0.0) return DielectricResponse::metallic();
            const double up = model.plasma_frequency;
            return DielectricResponse::finite(1.0 + (up / u) * (up / u));
        }
        case ModelKind::constant_epsilon:
            return DielectricResponse::finite(model.epsilon_constant);
        default:
            return lorentz_lorenz(eval_alpha0(model, u));
    }
}

}  // namespace casimir
