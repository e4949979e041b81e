#include "casimir/validation.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <ostream>
#include <sstream>

#include "casimir/dipole.hpp"
#include "casimir/planar.hpp"
#include "casimir/spherical.hpp"

namespace casimir::validation {

namespace {

using planar::FrequencyMomentumPoint;
using planar::Mode;
using planar::PlanarCavity;
using planar::ZeroModeTePolicy;
using spherical::BallChannel;
using spherical::BesselKind;
using spherical::Polarization;
using spherical::SphericalMode;

double seconds_since(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string describe(double observed, double threshold) {
    std::ostringstream os;
    os << "observed " << observed << " vs bound " << threshold;
    return os.str();
}

double rel_diff(double a, double b) { return std::abs(a - b) / std::abs(b); }

// ---------------------------------------------------------------- criterion 1

CheckResult perfect_conductor_pressure() {
    const auto t0 = std::chrono::steady_clock::now();
    PlanarCavity cavity;
    cavity.gap = 1.0;
    cavity.m0_te_policy = ZeroModeTePolicy::perfect_conductor;
    cavity.quad.rel_tol = 1e-10;
    const double pressure = planar::pressure_zero_temperature(cavity);
    const double elapsed = seconds_since(t0);

    const double target = -M_PI * M_PI / 240.0;
    const double err = rel_diff(pressure, target);
    CheckResult r{"perfect_conductor_pressure", err <= 1e-6 && elapsed < 1.0, err, 1e-6, ""};
    std::ostringstream os;
    os << "P a^4 = " << pressure << ", target " << target << ", " << elapsed << " s";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------- criterion 2

CheckResult thermodynamic_identity() {
    CheckResult r{"thermodynamic_identity", true, 0.0, 1e-6, ""};
    const double a = 1.0, h = 1e-4;
    for (double temperature : {0.0, 0.1, 1.0}) {
        PlanarCavity cavity;
        cavity.gap = a;
        cavity.left = cavity.right = PolarizabilityModel::constant_eps(4.0);
        cavity.temperature = temperature;
        cavity.quad.rel_tol = 1e-11;
        cavity.sum.rel_tol = 1e-12;

        PlanarCavity plus = cavity, minus = cavity;
        plus.gap = a + h;
        minus.gap = a - h;
        const double dfda = -(planar::free_energy_per_area(plus) -
                              planar::free_energy_per_area(minus)) /
                            (2.0 * h);
        const double pressure = (temperature > 0.0)
                                    ? planar::pressure_finite_temperature(cavity)
                                    : planar::pressure_zero_temperature(cavity);
        const double err = rel_diff(dfda, pressure);
        r.observed = std::max(r.observed, err);
        if (err > r.threshold) r.passed = false;
    }
    r.detail = describe(r.observed, r.threshold) + " (max over Ta in {0, 0.1, 1})";
    return r;
}

// ---------------------------------------------------------------- criterion 3

struct BilinearProbe {
    BesselKind f, g;
    double lower;  // lower endpoint as a fraction of R (0 for regular pairs)
};

double reduced_value(BesselKind kind, int l, double x) {
    const auto pair = spherical::modified_sph_bessel(l, x);
    return (kind == BesselKind::j ? pair.i : pair.k).val().value();
}

double reduced_deriv(BesselKind kind, int l, double x) {
    const auto pair = spherical::modified_sph_bessel(l, x);
    return (kind == BesselKind::j ? pair.i : pair.k).deriv().value();
}

CheckResult bilinear_form_identities() {
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r{"bilinear_form_identities", true, 0.0, 1e-8, ""};
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-11;

    const BilinearProbe probes[] = {{BesselKind::j, BesselKind::j, 0.0},
                                    {BesselKind::j, BesselKind::h1, 0.5},
                                    {BesselKind::h1, BesselKind::j, 0.5},
                                    {BesselKind::h1, BesselKind::h1, 0.5}};

    for (int l = 1; l <= 10; ++l)
        for (double ur : {0.1, 1.0, 10.0})
            for (double eps : {1.5, 4.0, 16.0}) {
                const BallChannel ch = spherical::make_channel(1.0, ur, eps);
                const double se = std::sqrt(eps);
                const double alpha = eps - 1.0;
                const double q = l * (l + 1.0);
                for (const auto& probe : probes) {
                    const double lo = probe.lower * ch.radius;

                    auto fg = [&](double rho) {
                        return rho * rho * reduced_value(probe.f, l, ch.u * rho) *
                               reduced_value(probe.g, l, se * ch.u * rho);
                    };
                    const double quad1 = alpha * num::integrate_finite(fg, lo, ch.radius, spec).value;
                    double rhs1 = spherical::bilinear1_bracket(probe.f, probe.g, l, ch,
                                                               ch.radius)
                                      .value();
                    if (lo > 0.0)
                        rhs1 -= spherical::bilinear1_bracket(probe.f, probe.g, l, ch, lo).value();
                    const double res1 =
                        std::abs(quad1 - rhs1) / std::max(std::abs(rhs1), std::abs(quad1));

                    auto fg2 = [&](double rho) {
                        const double f = reduced_value(probe.f, l, ch.u * rho);
                        const double fd = reduced_deriv(probe.f, l, ch.u * rho);
                        const double g = reduced_value(probe.g, l, se * ch.u * rho);
                        const double gd = reduced_deriv(probe.g, l, se * ch.u * rho);
                        const double drf = f + ch.u * rho * fd;
                        const double drg = g + se * ch.u * rho * gd;
                        return drf * drg + q * f * g;
                    };
                    const double quad2 =
                        alpha * num::integrate_finite(fg2, lo, ch.radius, spec).value;
                    double rhs2 = spherical::bilinear2_boundary(probe.f, probe.g, l, ch,
                                                                ch.radius)
                                      .value() -
                                  ch.u * ch.u * rhs1;
                    if (lo > 0.0)
                        rhs2 -= spherical::bilinear2_boundary(probe.f, probe.g, l, ch, lo).value();
                    const double res2 =
                        std::abs(quad2 - rhs2) / std::max(std::abs(rhs2), std::abs(quad2));

                    r.observed = std::max(r.observed, std::max(res1, res2));
                }
            }
    const double elapsed = seconds_since(t0);
    r.passed = r.observed <= r.threshold && elapsed < 10.0;
    r.detail = describe(r.observed, r.threshold) + ", " + std::to_string(elapsed) + " s";
    return r;
}

// ---------------------------------------------------------------- criterion 4

CheckResult planar_multiplicativity() {
    CheckResult r{"planar_multiplicativity", true, 0.0, 1e-8, ""};
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    for (double eps : {1.5, 4.0, 16.0})
        for (double u : {0.1, 1.0, 10.0})
            for (double p : {0.1, 1.0, 10.0})
                for (Mode mode : {Mode::te, Mode::tm}) {
                    const double res = planar::verify_multiplicativity(
                        FrequencyMomentumPoint{u, p}, DielectricResponse::finite(eps), mode,
                        spec);
                    r.observed = std::max(r.observed, res);
                }
    r.passed = r.observed <= r.threshold;
    r.detail = describe(r.observed, r.threshold);
    return r;
}

// ---------------------------------------------------------------- criterion 5

CheckResult splitting_identity(int pairs) {
    CheckResult r{"splitting_identity", true, 0.0, 1e-12, ""};
    const double u = 0.7, a0 = 0.02, min_dist = 0.33;
    for (int i = 0; i < pairs; ++i) {
        const auto body_a =
            dipole::random_cloud(8, {0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, min_dist, a0,
                                 100 + static_cast<std::uint64_t>(i), "a");
        const auto body_b =
            dipole::random_cloud(8, {2.2, 0.0, 0.0}, {3.2, 1.0, 1.0}, min_dist, a0,
                                 200 + static_cast<std::uint64_t>(i), "b");
        const auto split = dipole::split_free_energy(body_a, body_b, u);

        dipole::DipoleLattice all = body_a;
        all.sites.insert(all.sites.end(), body_b.sites.begin(), body_b.sites.end());
        all.site_alpha0.insert(all.site_alpha0.end(), body_b.site_alpha0.begin(),
                               body_b.site_alpha0.end());
        all.exclusion = std::min(body_a.exclusion, body_b.exclusion);
        const double total = dipole::free_energy_spectral(all, u);

        const double residual =
            std::abs(total - (split.f_a + split.f_b + split.f_ab)) / std::abs(total);
        r.observed = std::max(r.observed, residual);
    }
    r.passed = r.observed <= r.threshold;
    r.detail = describe(r.observed, r.threshold) + " (relative, " + std::to_string(pairs) +
               " random pairs)";
    return r;
}

// ---------------------------------------------------------------- criterion 6

CheckResult series_logdet_consistency() {
    CheckResult r{"series_logdet_consistency", true, 0.0, 0.0, ""};
    const double a0 = 0.85, u = 0.5;
    const int n_max = 40;
    const auto lattice = dipole::cubic_slab(3, 3, 3, 1.0, a0, Eigen::Vector3d::Zero(), "cube");
    const auto coupling = dipole::build_coupling(lattice, u);
    const double radius = dipole::spectral_radius(coupling);
    const double n_dim = static_cast<double>(coupling.m.rows());

    const double spectral = dipole::free_energy_spectral(lattice, u);
    const double series = dipole::free_energy_series(lattice, u, n_max);
    const double bound = n_dim * std::pow(radius, n_max + 1) / ((n_max + 1) * (1.0 - radius));
    const double diff = std::abs(series - spectral);

    r.observed = diff;
    r.threshold = bound;
    r.passed = radius <= 0.5 && diff <= bound;
    std::ostringstream os;
    os << "spectral radius " << radius << ", |series - logdet| " << diff << " vs tail bound "
       << bound;
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------- criterion 7

CheckResult casimir_polder_exponent_check() {
    dipole::ThermalSpec spec;
    // The pair energy reaches ~1e-11 at the far end of the decade; the
    // log-det evaluation noise (~1e-16 absolute) caps the usable tolerance.
    spec.quad.rel_tol = 2e-5;
    const std::vector<double> separations = {5.0,  6.46, 8.34, 10.8, 13.9,
                                             17.9, 23.2, 29.9, 38.7, 50.0};
    const double slope = dipole::casimir_polder_exponent(5.0, separations, 0.0, spec);
    CheckResult r{"casimir_polder_exponent", std::abs(slope + 7.0) <= 0.05,
                  std::abs(slope + 7.0), 0.05, ""};
    std::ostringstream os;
    os << "fitted exponent " << slope << " (target -7.00 +/- 0.05)";
    r.detail = os.str();
    return r;
}

// ---------------------------------------------------------------- criterion 8

CheckResult depolarization_limit() {
    const Eigen::Matrix3d m = dipole::depolarization_integral(1.0, 1e-3);
    const Eigen::Matrix3d target = -Eigen::Matrix3d::Identity() / 3.0;
    const double err = (m - target).cwiseAbs().maxCoeff();
    CheckResult r{"depolarization_limit", err <= 1e-6, err, 1e-6, ""};
    r.detail = describe(err, 1e-6) + " (componentwise at u a = 1e-3)";
    return r;
}

// ---------------------------------------------------------------- criterion 9

CheckResult zero_mode_te_policy() {
    CheckResult r{"zero_mode_te_policy", true, 0.0, 1e-10, ""};
    const double a = 1.0, temperature = 0.1, up = 1.0;

    PlanarCavity micro;
    micro.gap = a;
    micro.temperature = temperature;
    micro.left = micro.right = PolarizabilityModel::plasma(up);
    micro.m0_te_policy = ZeroModeTePolicy::microscopic_zero;
    micro.quad.rel_tol = 1e-12;
    micro.sum.rel_tol = 1e-12;
    PlanarCavity lifshitz = micro;
    lifshitz.m0_te_policy = ZeroModeTePolicy::lifshitz_limit;

    const double p_micro = planar::pressure_finite_temperature(micro);
    const double p_lifshitz = planar::pressure_finite_temperature(lifshitz);

    // Independent analytic m = 0 TE term: (T/2pi) int p^2 loop(p) dp with the
    // plasma-limit reflection.
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-13;
    auto integrand = [&](double p) {
        const double kbar = std::hypot(up, p);
        const double rr = std::pow(up * up / ((kbar + p) * (kbar + p)), 2);
        const double x = rr * std::exp(-2.0 * p * a);
        return p * p * x / (1.0 - x);
    };
    const double te_term =
        temperature / (2.0 * M_PI) * num::integrate_semi_infinite(integrand, spec, 0.5 / a).value;

    const double policy_gap = p_micro - p_lifshitz;
    const double err_plasma = rel_diff(policy_gap, te_term);

    // Any finite-eps(0) model: the policies must agree identically.
    PlanarCavity fin = micro;
    fin.left = fin.right = PolarizabilityModel::constant_eps(4.0);
    PlanarCavity fin_l = fin;
    fin_l.m0_te_policy = ZeroModeTePolicy::lifshitz_limit;
    const double p_fin_micro = planar::pressure_finite_temperature(fin);
    const double p_fin_lifshitz = planar::pressure_finite_temperature(fin_l);
    const double err_finite = std::abs(p_fin_micro - p_fin_lifshitz) / std::abs(p_fin_micro);

    r.observed = std::max(err_plasma, err_finite / 1e-2);  // scale to shared bound
    r.passed = err_plasma <= 1e-10 && err_finite <= 1e-12;
    std::ostringstream os;
    os << "plasma policy gap " << policy_gap << " vs analytic m=0 TE term " << te_term
       << " (rel " << err_plasma << "); finite-eps policy agreement " << err_finite;
    r.detail = os.str();
    r.observed = err_plasma;
    return r;
}

// --------------------------------------------------------------- criterion 10

CheckResult dilute_slab_cross_validation() {
    const auto t0 = std::chrono::steady_clock::now();
    const double spacing = 1.0, a0 = 0.02, d_site = 4.0, h = 0.02;

    const auto slab_a = dipole::cubic_slab(6, 6, 2, spacing, a0, {0.0, 0.0, 0.0}, "a");
    const auto slab_b = dipole::cubic_slab(6, 6, 2, spacing, a0, {0.0, 0.0, d_site}, "b");

    dipole::ThermalSpec spec;
    spec.quad.rel_tol = 1e-7;
    spec.frequency_scale = 1.0 / d_site;
    const double force = dipole::force_between(slab_a, slab_b, 2, h, 0.0, spec);

    // Continuum bodies: each two-layer slab is one spacing thick plus a half
    // cell on both faces, so the surface gap is the facing-layer distance
    // minus one spacing.
    const double gap = (d_site - spacing) - spacing;
    const double area = 36.0 * spacing * spacing;
    const double alpha0 = a0 / (spacing * spacing * spacing);
    const double eps = lorentz_lorenz(alpha0).value();
    const double p_dilute =
        -23.0 * (eps - 1.0) * (eps - 1.0) / (640.0 * M_PI * M_PI * std::pow(gap, 4));
    const double predicted = p_dilute * area;

    // Independent control: the dilute oracle force must coincide with the
    // pairwise-additive retarded sum over the same sites. A mismatch there
    // would implicate the oracle; a mismatch against P*A alone is geometry
    // (two-layer discreteness and edge leakage at this slab size).
    const double cp_const = 23.0 * a0 * a0 / (64.0 * std::pow(M_PI, 3));
    double pairwise = 0.0;
    for (const auto& xa : slab_a.sites)
        for (const auto& xb : slab_b.sites) {
            const Eigen::Vector3d d = xb - xa;
            const double r2 = d.squaredNorm();
            pairwise += -7.0 * cp_const * d.z() / (r2 * r2 * r2 * r2 * std::sqrt(r2));
        }
    const double pairwise_err = rel_diff(force, pairwise);

    const double err = rel_diff(force, predicted);
    const double elapsed = seconds_since(t0);
    CheckResult r{"dilute_slab_cross_validation",
                  err <= 0.25 && pairwise_err <= 0.05 && elapsed < 300.0, err, 0.25, ""};
    std::ostringstream os;
    os << "oracle force " << force << " vs dilute Lifshitz P*A " << predicted << " (rel " << err
       << "); pairwise-additive control " << pairwise << " (rel " << pairwise_err << "), "
       << elapsed << " s";
    r.detail = os.str();
    return r;
}

// --------------------------------------------------------------- criterion 11

CheckResult mu_regularity() {
    const SphericalMode mode{Polarization::te, 1};

    auto mu_at = [&](double eps) {
        return spherical::mu_sphere(mode, spherical::make_channel(1.0, 1.0, eps));
    };
    const double ratio2 = mu_at(1.0 + 1e-2) / 1e-4;
    const double ratio3 = mu_at(1.0 + 1e-3) / 1e-6;
    const double quadratic_stability = std::abs(ratio2 / ratio3 - 1.0);

    const double mu_metal = mu_at(1e6);
    const auto bessel = spherical::modified_sph_bessel(1, 1.0);
    const double ideal = -(M_PI / 2.0) *
                         (bessel.i.val() / bessel.k.val()).value();  // (-1)^l at l = 1
    const double metal_err = rel_diff(mu_metal, ideal);

    CheckResult r{"mu_regularity", quadratic_stability <= 0.01 && metal_err <= 1e-2,
                  quadratic_stability, 0.01, ""};
    std::ostringstream os;
    os << "mu/(eps-1)^2 ratio drift " << quadratic_stability << " (1e-2 vs 1e-3); linear-rate "
       << "ratios mu/(eps-1): " << mu_at(1.0 + 1e-2) / 1e-2 << " vs " << mu_at(1.0 + 1e-3) / 1e-3
       << "; metallic-limit rel err " << metal_err << " (bound 1e-2)";
    r.detail = os.str();
    return r;
}

// ------------------------------------------------------------ quick-only checks

CheckResult dielectric_roundtrip() {
    CheckResult r{"dielectric_roundtrip", true, 0.0, 1e-12, ""};
    for (double a0 = 0.0; a0 <= 2.99; a0 += 0.115) {
        const double eps = lorentz_lorenz(a0).value();
        r.observed = std::max(r.observed, std::abs(inverse_lorentz_lorenz(eps) - a0));
    }
    r.passed = r.observed <= r.threshold;
    r.detail = describe(r.observed, r.threshold);
    return r;
}

CheckResult bessel_wronskian() {
    CheckResult r{"bessel_wronskian", true, 0.0, 1e-12, ""};
    for (int l : {0, 1, 2, 5, 10, 25, 60})
        for (double x : {1e-3, 0.1, 1.0, 3.0, 10.0, 50.0, 200.0}) {
            const auto pair = spherical::modified_sph_bessel(l, x);
            r.observed = std::max(r.observed, spherical::wronskian_residual(pair, x));
        }
    r.passed = r.observed <= r.threshold;
    r.detail = describe(r.observed, r.threshold);
    return r;
}

CheckResult two_plate_gamma_identity() {
    CheckResult r{"two_plate_gamma_identity", true, 0.0, 1e-14, ""};
    for (double eps : {1.5, 4.0, 16.0})
        for (double u : {0.1, 1.0, 10.0})
            for (double p : {0.1, 1.0, 10.0})
                for (Mode mode : {Mode::te, Mode::tm}) {
                    const FrequencyMomentumPoint pt{u, p};
                    const auto response = DielectricResponse::finite(eps);
                    const auto gamma = planar::gamma_planar(pt, response, mode, 1.0);
                    const auto refl = planar::reflection(pt, response);
                    const double rr = (mode == Mode::te) ? refl.te * refl.te : refl.tm * refl.tm;
                    const double direct = rr * std::exp(-2.0 * std::hypot(u, p));
                    const double err = std::abs(gamma.two_plate - direct) /
                                       std::max(std::abs(direct), 1e-300);
                    r.observed = std::max(r.observed, err);
                }
    r.passed = r.observed <= r.threshold;
    r.detail = describe(r.observed, r.threshold);
    return r;
}

}  // namespace

std::vector<CheckResult> run_acceptance() {
    std::vector<CheckResult> results;
    results.push_back(perfect_conductor_pressure());
    results.push_back(thermodynamic_identity());
    results.push_back(bilinear_form_identities());
    results.push_back(planar_multiplicativity());
    results.push_back(splitting_identity(20));
    results.push_back(series_logdet_consistency());
    results.push_back(casimir_polder_exponent_check());
    results.push_back(depolarization_limit());
    results.push_back(zero_mode_te_policy());
    results.push_back(dilute_slab_cross_validation());
    results.push_back(mu_regularity());
    return results;
}

std::vector<CheckResult> run_quick() {
    std::vector<CheckResult> results;
    results.push_back(dielectric_roundtrip());
    results.push_back(bessel_wronskian());
    results.push_back(two_plate_gamma_identity());
    results.push_back(perfect_conductor_pressure());
    results.push_back(depolarization_limit());
    results.push_back(splitting_identity(3));
    return results;
}

int report(const std::vector<CheckResult>& results, std::ostream& out) {
    int failures = 0;
    for (std::size_t i = 0; i < results.size(); ++i) {
        const CheckResult& r = results[i];
        if (!r.passed) ++failures;
        out << (r.passed ? "PASS" : "FAIL") << "  " << r.name;
        if (!r.detail.empty()) out << "  [" << r.detail << "]";
        out << "\n";
    }
    return failures;
}

}  // namespace casimir::validation
