#include "casimir/planar.hpp"

#include <cmath>

namespace casimir::planar {

namespace {

void check_point(const FrequencyMomentumPoint& pt) {
    if (!(pt.u >= 0.0) || !(pt.p >= 0.0))
        throw std::invalid_argument("planar: point requires u >= 0 and p >= 0");
}

// kappa1 - kappa0 without cancellation: (eps-1) u^2 / (kappa1 + kappa0).
double kappa_gap(double u, double eps, const RotatedWavenumbers& k) {
    return (eps - 1.0) * u * u / (k.kappa1 + k.kappa0);
}

const PolarizabilityModel& side_model(const PlanarCavity& cavity, bool left_side) {
    return left_side ? cavity.left : cavity.right;
}

}  // namespace

RotatedWavenumbers rotated_wavenumbers(const FrequencyMomentumPoint& pt,
                                       const DielectricResponse& eps) {
    check_point(pt);
    const double kappa0 = std::hypot(pt.u, pt.p);
    if (eps.is_metallic()) {
        if (pt.u == 0.0)
            throw std::domain_error(
                "rotated_wavenumbers: metallic response at u = 0 is policy business");
        return {kappa0, INFINITY};
    }
    const double e = eps.value();
    return {kappa0, std::sqrt(e * pt.u * pt.u + pt.p * pt.p)};
}

ReflectionPair reflection(const FrequencyMomentumPoint& pt, const DielectricResponse& eps) {
    check_point(pt);
    if (pt.u == 0.0 && pt.p == 0.0)
        throw std::invalid_argument("reflection: (u, p) = (0, 0) is a measure-zero point");
    if (eps.is_metallic()) {
        if (pt.u == 0.0)
            throw std::domain_error("reflection: metallic at u = 0 requires the m0 policy");
        return {-1.0, 1.0};
    }
    const double e = eps.value();
    const RotatedWavenumbers k = rotated_wavenumbers(pt, eps);
    const double diff = kappa_gap(pt.u, e, k);
    const double sum = k.kappa1 + k.kappa0;
    ReflectionPair r;
    r.te = -diff / sum;
    // kappa1 - eps kappa0 = -(eps-1)(p^2 + kappa0 kappa1)/(kappa1 + kappa0)
    r.tm = (e - 1.0) * (pt.p * pt.p + k.kappa0 * k.kappa1) /
           (sum * (k.kappa1 + e * k.kappa0));
    return r;
}

double zero_mode_te_reflection(double p, const PolarizabilityModel& model,
                               ZeroModeTePolicy policy) {
    if (!(p > 0.0)) throw std::invalid_argument("zero_mode_te_reflection: p must be > 0");
    switch (policy) {
        case ZeroModeTePolicy::microscopic_zero:
            return 0.0;
        case ZeroModeTePolicy::perfect_conductor:
            return -1.0;
        case ZeroModeTePolicy::lifshitz_limit: {
            if (model.kind == ModelKind::plasma) {
                const double up = model.plasma_frequency;
                if (up == 0.0) return 0.0;
                const double kbar = std::hypot(up, p);
                return -up * up / ((kbar + p) * (kbar + p));
            }
            if (eval_epsilon(model, 0.0).is_metallic())
                throw std::domain_error(
                    "zero_mode_te_reflection: metallic u->0 limit shipped for plasma only");
            return 0.0;  // finite eps(0): the limit vanishes like u^2
        }
    }
    throw std::logic_error("zero_mode_te_reflection: unknown policy");
}

ReflectionPair effective_reflection(const FrequencyMomentumPoint& pt,
                                    const PlanarCavity& cavity, bool left_side) {
    check_point(pt);
    if (cavity.m0_te_policy == ZeroModeTePolicy::perfect_conductor) return {-1.0, 1.0};
    const PolarizabilityModel& model = side_model(cavity, left_side);
    if (pt.u > 0.0) return reflection(pt, eval_epsilon(model, pt.u));

    ReflectionPair r;
    const DielectricResponse eps0 = eval_epsilon(model, 0.0);
    r.tm = eps0.is_metallic() ? 1.0 : (eps0.value() - 1.0) / (eps0.value() + 1.0);
    r.te = zero_mode_te_reflection(pt.p, model, cavity.m0_te_policy);
    return r;
}

double mode_loop_factor(const FrequencyMomentumPoint& pt, const PlanarCavity& cavity,
                        Mode mode) {
    const ReflectionPair rl = effective_reflection(pt, cavity, true);
    const ReflectionPair rr = effective_reflection(pt, cavity, false);
    const double rprod = (mode == Mode::te) ? rl.te * rr.te : rl.tm * rr.tm;
    const double kappa0 = std::hypot(pt.u, pt.p);
    const double decay = std::exp(-2.0 * kappa0 * cavity.gap);
    const double x = rprod * decay;
    const double denom = (rprod == 1.0) ? -std::expm1(-2.0 * kappa0 * cavity.gap) : 1.0 - x;
    if (!(denom > 0.0))
        throw std::logic_error("mode_loop_factor: loop denominator not positive");
    return x / denom;
}

double pressure_integrand(const FrequencyMomentumPoint& pt, const PlanarCavity& cavity) {
    check_point(pt);
    if (pt.u == 0.0 && pt.p == 0.0) return 0.0;  // measure-zero point
    const double kappa0 = std::hypot(pt.u, pt.p);
    return -kappa0 * (mode_loop_factor(pt, cavity, Mode::te) +
                      mode_loop_factor(pt, cavity, Mode::tm));
}

namespace {

// int_0^inf p dp f(u, p) via the rotated variable kappa0 = u + t.
double transverse_integral(const PlanarCavity& cavity, double u,
                           const std::function<double(FrequencyMomentumPoint)>& f,
                           const num::QuadratureSpec& spec) {
    auto integrand = [&](double t) {
        const double p = std::sqrt(t * (t + 2.0 * u));
        return (u + t) * f(FrequencyMomentumPoint{u, p});
    };
    try {
        return num::integrate_semi_infinite(integrand, spec, 0.5 / cavity.gap).value;
    } catch (const num::NonConvergence& e) {
        throw num::NonConvergence(std::string(e.what()) + " in the transverse channel at u = " +
                                      std::to_string(u),
                                  e.best_estimate, e.error_estimate);
    }
}

num::QuadratureSpec inner_spec(const PlanarCavity& cavity) {
    num::QuadratureSpec s = cavity.quad;
    s.rel_tol = 0.1 * cavity.quad.rel_tol;
    return s;
}

double log_sum_integrand(const FrequencyMomentumPoint& pt, const PlanarCavity& cavity) {
    if (pt.u == 0.0 && pt.p == 0.0) return 0.0;
    const ReflectionPair rl = effective_reflection(pt, cavity, true);
    const ReflectionPair rr = effective_reflection(pt, cavity, false);
    const double kappa0 = std::hypot(pt.u, pt.p);
    const double decay = std::exp(-2.0 * kappa0 * cavity.gap);
    return std::log1p(-rl.te * rr.te * decay) + std::log1p(-rl.tm * rr.tm * decay);
}

}  // namespace

num::Estimate pressure_zero_temperature_est(const PlanarCavity& cavity) {
    if (!(cavity.gap > 0.0)) throw std::invalid_argument("pressure: gap must be > 0");
    const num::QuadratureSpec inner = inner_spec(cavity);
    auto outer = [&](double u) {
        return transverse_integral(
            cavity, u, [&](FrequencyMomentumPoint pt) { return pressure_integrand(pt, cavity); },
            inner);
    };
    const auto res = num::integrate_semi_infinite(outer, cavity.quad, 0.5 / cavity.gap);
    const double norm = 2.0 * M_PI * M_PI;
    return {res.value / norm, res.error / norm};
}

double pressure_zero_temperature(const PlanarCavity& cavity) {
    return pressure_zero_temperature_est(cavity).value;
}

num::Estimate pressure_finite_temperature_est(const PlanarCavity& cavity) {
    if (!(cavity.gap > 0.0)) throw std::invalid_argument("pressure: gap must be > 0");
    if (!(cavity.temperature > 0.0))
        throw std::invalid_argument("pressure_finite_temperature: temperature must be > 0");
    const num::QuadratureSpec inner = inner_spec(cavity);
    auto per_frequency = [&](double u) {
        return transverse_integral(
                   cavity, u,
                   [&](FrequencyMomentumPoint pt) { return pressure_integrand(pt, cavity); },
                   inner) /
               (2.0 * M_PI);
    };
    const auto res = num::matsubara_sum(per_frequency, cavity.temperature, cavity.sum);
    return {res.value, res.tail_estimate};
}

double pressure_finite_temperature(const PlanarCavity& cavity) {
    return pressure_finite_temperature_est(cavity).value;
}

num::Estimate free_energy_per_area_est(const PlanarCavity& cavity) {
    if (!(cavity.gap > 0.0)) throw std::invalid_argument("free_energy: gap must be > 0");
    const num::QuadratureSpec inner = inner_spec(cavity);
    auto per_frequency = [&](double u) {
        return transverse_integral(
            cavity, u, [&](FrequencyMomentumPoint pt) { return log_sum_integrand(pt, cavity); },
            inner);
    };
    if (cavity.temperature > 0.0) {
        const auto res =
            num::matsubara_sum([&](double u) { return per_frequency(u) / (4.0 * M_PI); },
                               cavity.temperature, cavity.sum);
        return {res.value, res.tail_estimate};
    }
    const auto res = num::integrate_semi_infinite(per_frequency, cavity.quad, 0.5 / cavity.gap);
    const double norm = 4.0 * M_PI * M_PI;
    return {res.value / norm, res.error / norm};
}

double free_energy_per_area(const PlanarCavity& cavity) {
    return free_energy_per_area_est(cavity).value;
}

GammaPlanar gamma_planar(const FrequencyMomentumPoint& pt, const DielectricResponse& eps,
                         Mode mode, double gap) {
    check_point(pt);
    if (eps.is_metallic()) throw std::domain_error("gamma_planar: requires finite epsilon");
    if (pt.u == 0.0 && mode == Mode::te)
        throw std::domain_error("gamma_planar: TE channel needs u > 0");
    const double e = eps.value();
    const RotatedWavenumbers k = rotated_wavenumbers(pt, eps);
    if (!(k.kappa0 * k.kappa1 > 0.0))
        throw std::domain_error("gamma_planar: singular channel kappa0 kappa1 = 0");

    const double alpha = e - 1.0;
    const double sum = k.kappa1 + k.kappa0;
    const double u2 = pt.u * pt.u;
    const ReflectionPair r = reflection(pt, eps);
    const double decay = std::exp(-2.0 * k.kappa0 * gap);

    GammaPlanar g;
    if (mode == Mode::te) {
        // (kappa1-kappa0)^2 = alpha^2 u^4 / (kappa1+kappa0)^2
        g.one_plate = alpha * alpha * u2 * u2 / (sum * sum * 4.0 * k.kappa1 * k.kappa0);
        g.two_plate = r.te * r.te * decay;
    } else {
        const double c = pt.p * pt.p + k.kappa0 * k.kappa1;
        g.one_plate = alpha * alpha * c * c / (sum * sum * 4.0 * e * k.kappa1 * k.kappa0);
        g.two_plate = r.tm * r.tm * decay;
    }
    return g;
}

namespace {

struct Kernel1D {
    double kappa;
    double prefactor;  // value(t) = prefactor * exp(-kappa |t|)
    double at(double t) const { return prefactor * std::exp(-kappa * std::abs(t)); }
    double d_at(double t) const {  // derivative in t, away from the kink
        return (t >= 0.0 ? -kappa : kappa) * at(t);
    }
};

}  // namespace

double verify_multiplicativity(const FrequencyMomentumPoint& pt, const DielectricResponse& eps,
                               Mode mode, const num::QuadratureSpec& spec) {
    check_point(pt);
    if (!(pt.u > 0.0)) throw std::invalid_argument("verify_multiplicativity: needs u > 0");
    const double e = eps.value();
    if (e == 1.0) return 0.0;  // both sides vanish

    const RotatedWavenumbers k = rotated_wavenumbers(pt, eps);
    const double u2 = pt.u * pt.u;
    const double p2 = pt.p * pt.p;

    // Rotated one-dimensional mode kernels of the vacuum and the homogeneous
    // medium. TE carries a plain product contraction; TM contracts with
    // p^2 f g + f' g' at the shared coordinate.
    const bool te = (mode == Mode::te);
    const Kernel1D medium{k.kappa1, te ? -u2 / (2.0 * k.kappa1) : 1.0 / (2.0 * e * k.kappa1)};
    const Kernel1D vacuum{k.kappa0, te ? -u2 / (2.0 * k.kappa0) : 1.0 / (2.0 * k.kappa0)};

    auto contract = [&](double f, double df, double g, double dg) {
        return te ? f * g : p2 * f * g + df * dg;
    };

    const double x = -0.2 / (k.kappa0 + k.kappa1);
    const double xp = 0.3 / (k.kappa0 + k.kappa1);
    const double map_scale = 1.0 / (k.kappa0 + k.kappa1);

    // S2(z) = int_0^inf dy <medium(x - y), vacuum(y - z)>, z < 0 < y.
    auto s2 = [&](double z) {
        auto body = [&](double y) {
            const double f = medium.at(x - y), df = -medium.d_at(x - y);
            const double g = vacuum.at(y - z), dg = vacuum.d_at(y - z);
            return contract(f, df, g, dg);
        };
        return num::integrate_semi_infinite(body, spec, map_scale).value;
    };
    // d/dz of the same integral (the vacuum kernel carries the z dependence).
    auto ds2 = [&](double z) {
        auto body = [&](double y) {
            const double f = medium.at(x - y), df = -medium.d_at(x - y);
            const double g = -vacuum.d_at(y - z);
            const double dg = -vacuum.kappa * vacuum.kappa * vacuum.at(y - z);
            return contract(f, df, g, dg);
        };
        return num::integrate_semi_infinite(body, spec, map_scale).value;
    };

    // N = int_{-inf}^0 dz <S2(z), medium(z - xp)>.
    auto outer = [&](double v) {
        const double z = -v;
        const double f = s2(z), df = ds2(z);
        const double g = medium.at(z - xp), dg = medium.d_at(z - xp);
        return contract(f, df, g, dg);
    };
    const double n = num::integrate_semi_infinite(outer, spec, map_scale).value;

    const double gamma_quad = n / medium.at(x - xp);
    const double alpha = e - 1.0;
    const double closed =
        gamma_planar(pt, eps, mode, 1.0).one_plate;  // gap irrelevant for one-plate
    return std::abs(alpha * alpha * gamma_quad - closed) / std::abs(closed);
}

double greens_between_plates(double x, double xp, const FrequencyMomentumPoint& pt,
                             const PlanarCavity& cavity, Mode mode) {
    const double a = cavity.gap;
    if (!(x > 0.0 && x < a && xp > 0.0 && xp < a))
        throw std::domain_error("greens_between_plates: arguments must lie inside the gap");
    if (!(pt.u > 0.0)) throw std::invalid_argument("greens_between_plates: needs u > 0");

    const ReflectionPair rl = effective_reflection(pt, cavity, true);
    const ReflectionPair rr = effective_reflection(pt, cavity, false);
    const double r_a = (mode == Mode::te) ? rl.te : rl.tm;
    const double r_b = (mode == Mode::te) ? rr.te : rr.tm;

    const double kappa0 = std::hypot(pt.u, pt.p);
    const double decay = std::exp(-2.0 * kappa0 * a);
    const double mu = 1.0 / (1.0 - r_a * r_b * decay);

    const double free_term = std::exp(-kappa0 * std::abs(x - xp));
    const double images = mu * (r_a * std::exp(-kappa0 * (x + xp)) +
                                r_b * std::exp(-kappa0 * (2.0 * a - x - xp)));
    const double round_trips =
        mu * r_a * r_b * decay * 2.0 * std::cosh(kappa0 * (x - xp));

    return -pt.u * pt.u / (2.0 * kappa0) * (free_term + images + round_trips);
}

LongitudinalU0 longitudinal_reflection_u0(double alpha0) {
    if (!(alpha0 >= 0.0 && alpha0 <= 6.0))
        throw std::domain_error(
            "longitudinal_reflection_u0: expansion converges for alpha0 < 6 only");
    return {(6.0 - 2.0 * alpha0) / (6.0 + alpha0), 3.0 * alpha0 / (6.0 + alpha0)};
}

TeConvergence te_convergence_gamma(const FrequencyMomentumPoint& pt, double alpha0) {
    if (!(alpha0 >= 0.0 && alpha0 <= 3.0))
        throw std::invalid_argument("te_convergence_gamma: alpha0 must lie in [0, 3]");
    if (pt.u > 0.0 && !(pt.p * pt.p > 2.0 * pt.u * pt.u))
        throw std::domain_error("te_convergence_gamma: restricted to p^2 > 2 u^2");

    if (pt.u == 0.0 || alpha0 == 0.0) return {alpha0 / 3.0, alpha0 < 3.0};
    if (alpha0 == 3.0) return {1.0, false};  // metallic boundary

    const DielectricResponse eps = lorentz_lorenz(alpha0);
    const RotatedWavenumbers k = rotated_wavenumbers(pt, eps);
    const double u2 = pt.u * pt.u;
    const double sum = k.kappa1 + k.kappa0;
    // (alpha0/alpha) (kappa1-kappa0)^2 / (4 k1 k0) in the cancellation-free form
    const double term = alpha0 * alpha0 * u2 * u2 /
                        ((1.0 - alpha0 / 3.0) * sum * sum * 4.0 * k.kappa1 * k.kappa0);
    const double gamma = alpha0 / 3.0 - term;
    return {gamma, gamma < 1.0};
}

}  // namespace casimir::planar
