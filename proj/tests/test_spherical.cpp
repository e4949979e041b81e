#include <doctest.h>

#include <cmath>

#include "casimir/numerics.hpp"
#include "casimir/spherical.hpp"

using namespace casimir;
using namespace casimir::spherical;

namespace {

double reduced(BesselKind kind, int l, double x) {
    const auto pair = modified_sph_bessel(l, x);
    return (kind == BesselKind::j ? pair.i : pair.k).val().value();
}

double reduced_d(BesselKind kind, int l, double x) {
    const auto pair = modified_sph_bessel(l, x);
    return (kind == BesselKind::j ? pair.i : pair.k).deriv().value();
}

// Long-double k_l with derivative by the stable upward recurrence. At tiny
// arguments the first-form bracket cancels to O(x^2) of its terms, which
// doubles cannot resolve; the oracle side needs the extra digits.
void oracle_k_pair(int l, long double x, long double& value, long double& derivative) {
    const long double pi = 3.141592653589793238462643383279502884L;
    long double k_prev = pi / (2.0L * x) * std::exp(-x);
    long double k_cur = k_prev * (1.0L + 1.0L / x);
    if (l == 0) {
        value = k_prev;
        derivative = -k_cur;
        return;
    }
    for (int n = 1; n < l; ++n) {
        const long double k_next = k_prev + ((2.0L * n + 1.0L) / x) * k_cur;
        k_prev = k_cur;
        k_cur = k_next;
    }
    value = k_cur;
    derivative = -k_prev - ((l + 1.0L) / x) * k_cur;
}

// -(rho^2/u)[k'(u rho) k(se u rho) - se k(u rho) k'(se u rho)] in long double
double oracle_bracket_kk(int l, const BallChannel& ch, double rho) {
    const long double se = std::sqrt((long double)ch.eps);
    long double f, fd, g, gd;
    oracle_k_pair(l, ch.u * (long double)rho, f, fd);
    oracle_k_pair(l, se * ch.u * (long double)rho, g, gd);
    const long double bracket = fd * g - se * f * gd;
    return static_cast<double>(-(long double)rho * rho / ch.u * bracket);
}

// alpha * int_lo^R rho^2 F(u rho) G(se u rho) drho by adaptive quadrature
double quad_bilinear1(BesselKind f, BesselKind g, int l, const BallChannel& ch, double lo) {
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    const double se = std::sqrt(ch.eps);
    auto body = [&](double rho) {
        return rho * rho * reduced(f, l, ch.u * rho) * reduced(g, l, se * ch.u * rho);
    };
    return ch.alpha() * num::integrate_finite(body, lo, ch.radius, spec).value;
}

double quad_bilinear2(BesselKind f, BesselKind g, int l, const BallChannel& ch, double lo) {
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    const double se = std::sqrt(ch.eps);
    const double q = l * (l + 1.0);
    auto body = [&](double rho) {
        const double fv = reduced(f, l, ch.u * rho), fd = reduced_d(f, l, ch.u * rho);
        const double gv = reduced(g, l, se * ch.u * rho), gd = reduced_d(g, l, se * ch.u * rho);
        return (fv + ch.u * rho * fd) * (gv + se * ch.u * rho * gd) + q * fv * gv;
    };
    return ch.alpha() * num::integrate_finite(body, lo, ch.radius, spec).value;
}

}  // namespace

TEST_CASE("first bilinear form against the defining integral") {
    // regular pair: the 0-end bracket vanishes, full-range quadrature
    const auto ch = make_channel(1.0, 1.0, 4.0);
    const double quad = quad_bilinear1(BesselKind::j, BesselKind::j, 2, ch, 0.0);
    const double boundary = bilinear_form_1(BesselKind::j, BesselKind::j, 2, ch).value();
    CHECK(quad == doctest::Approx(boundary).epsilon(1e-8));

    // self-pair at eps = 1 is a self-Wronskian: B1 vanishes
    const auto unit = make_channel(1.0, 1.0, 1.0);
    CHECK(bilinear_form_1(BesselKind::j, BesselKind::j, 2, unit).value() == 0.0);
    CHECK_THROWS_AS(bilinear_form_1_raw(BesselKind::j, BesselKind::j, 2, unit),
                    std::domain_error);
}

TEST_CASE("singular h-pairs satisfy the two-bracket identity") {
    // int_lo^R = b1(R) - b1(lo): the h x h integrand diverges at the origin,
    // so the lower bracket carries the cutoff dependence.
    const auto ch = make_channel(1.0, 2.0, 2.0);
    const int l = 3;
    for (double lo : {0.5, 0.25}) {
        const double quad = quad_bilinear1(BesselKind::h1, BesselKind::h1, l, ch, lo);
        const double rhs =
            bilinear1_bracket(BesselKind::h1, BesselKind::h1, l, ch, ch.radius).value() -
            bilinear1_bracket(BesselKind::h1, BesselKind::h1, l, ch, lo).value();
        CHECK(quad == doctest::Approx(rhs).epsilon(1e-9));
    }

    // the stated tiny-cutoff variant: residual relative to the integral
    // scale, with the cutoff bracket from the long-double oracle (the
    // near-origin bracket cancels to O((u rho)^2) of its terms)
    const double lo = 1e-6;
    const double quad = quad_bilinear1(BesselKind::h1, BesselKind::h1, l, ch, lo);
    const double rhs =
        bilinear1_bracket(BesselKind::h1, BesselKind::h1, l, ch, ch.radius).value() -
        oracle_bracket_kk(l, ch, lo);
    CHECK(std::abs(quad - rhs) / std::max(std::abs(quad), std::abs(rhs)) < 1e-6);
}

TEST_CASE("second bilinear form against the defining integral") {
    const auto ch = make_channel(1.0, 1.0, 4.0);
    const int l = 1;
    const double quad = quad_bilinear2(BesselKind::j, BesselKind::j, l, ch, 0.0);
    const double boundary = bilinear_form_2(BesselKind::j, BesselKind::j, l, ch).value();
    CHECK(quad == doctest::Approx(boundary).epsilon(1e-8));

    const auto stiff = make_channel(1.0, 0.5, 16.0);
    const double quad2 = quad_bilinear2(BesselKind::j, BesselKind::j, 4, stiff, 0.0);
    const double boundary2 = bilinear_form_2(BesselKind::j, BesselKind::j, 4, stiff).value();
    CHECK(quad2 == doctest::Approx(boundary2).epsilon(1e-8));
}

TEST_CASE("integration-by-parts identity holds at eps = 1 from raw quadratures") {
    // int_0^R [(rho F)'(rho G)' + Q F G] = [(rho F)' rho G]_R - u^2 int rho^2 F G
    // checked with both sides from quadrature at eps = 1 (no boundary form).
    const double u = 1.3, radius = 1.0;
    const int l = 2;
    const double q = l * (l + 1.0);
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    auto lhs_body = [&](double rho) {
        const double fv = reduced(BesselKind::j, l, u * rho);
        const double fd = reduced_d(BesselKind::j, l, u * rho);
        const double drf = fv + u * rho * fd;
        return drf * drf + q * fv * fv;
    };
    auto rhs_body = [&](double rho) {
        const double fv = reduced(BesselKind::j, l, u * rho);
        return rho * rho * fv * fv;
    };
    const double lhs = num::integrate_finite(lhs_body, 0.0, radius, spec).value;
    const double fv = reduced(BesselKind::j, l, u * radius);
    const double fd = reduced_d(BesselKind::j, l, u * radius);
    const double rhs = (fv + u * radius * fd) * radius * fv -
                       u * u * num::integrate_finite(rhs_body, 0.0, radius, spec).value;
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
}

TEST_CASE("mode loop gamma of the ball") {
    const SphericalMode te{Polarization::te, 1};
    CHECK(gamma_sphere(te, make_channel(1.0, 1.0, 1.0)) == 0.0);

    // composed from independently validated quadrature/bracket ingredients
    const auto ch = make_channel(1.0, 1.0, 4.0);
    const double b1_jj = quad_bilinear1(BesselKind::j, BesselKind::j, 1, ch, 0.0);
    const double b1_hh = bilinear_form_1(BesselKind::h1, BesselKind::h1, 1, ch).value();
    const double composed =
        -std::sqrt(ch.eps) * std::pow(ch.u, 6) * (4.0 / (M_PI * M_PI)) * b1_hh * b1_jj;
    CHECK(gamma_sphere(te, ch) == doctest::Approx(composed).epsilon(1e-8));

    // Multipole behaviour at fixed uR: the TE loop quantity decays with l,
    // while the TM one saturates monotonically at the planar static limit
    // alpha^2/(4 eps) (large l probes a locally flat interface).
    double prev_te = std::abs(gamma_sphere({Polarization::te, 1}, ch));
    double prev_tm = gamma_sphere({Polarization::tm, 1}, ch);
    const double planar_limit =
        ch.alpha() * ch.alpha() / (4.0 * ch.eps);
    for (int l = 2; l <= 10; ++l) {
        const double cur_te = std::abs(gamma_sphere({Polarization::te, l}, ch));
        CHECK(cur_te < prev_te);
        prev_te = cur_te;

        const double cur_tm = gamma_sphere({Polarization::tm, l}, ch);
        CHECK(cur_tm > prev_tm);
        CHECK(cur_tm < planar_limit);
        prev_tm = cur_tm;
    }
    CHECK(gamma_sphere({Polarization::tm, 40}, ch) ==
          doctest::Approx(planar_limit).epsilon(0.01));
}

TEST_CASE("scattering coefficient mu") {
    const SphericalMode te{Polarization::te, 1};
    CHECK(mu_sphere(te, make_channel(1.0, 1.0, 1.0)) == 0.0);

    // vanishes linearly in (eps - 1): mu/(eps-1) converges; this pins the
    // leading Born rate of the exterior scattering coefficient
    const double r2 = mu_sphere(te, make_channel(1.0, 1.0, 1.0 + 1e-2)) / 1e-2;
    const double r3 = mu_sphere(te, make_channel(1.0, 1.0, 1.0 + 1e-3)) / 1e-3;
    CHECK(std::abs(r2 / r3 - 1.0) < 2e-3);

    // Born limit: mu -> (-1)^l u^3 alpha <j,j>_1 with the phase dictionary,
    // i.e. -(u^3 alpha/1) * int rho^2 i_l(u rho)^2 for l = 1
    num::QuadratureSpec spec;
    spec.rel_tol = 1e-12;
    auto body = [&](double rho) {
        const double v = reduced(BesselKind::j, 1, rho);
        return rho * rho * v * v;
    };
    const double born =
        -1e-3 * num::integrate_finite(body, 0.0, 1.0, spec).value;  // (-1)^1 u^3 alpha <jj>
    CHECK(mu_sphere(te, make_channel(1.0, 1.0, 1.0 + 1e-3)) ==
          doctest::Approx(born).epsilon(2e-3));

    // metallic limit for both polarizations
    const auto metal = make_channel(1.0, 1.0, 1e6);
    const auto pair = modified_sph_bessel(1, 1.0);
    const double ideal_te = -(M_PI / 2.0) * (pair.i.val() / pair.k.val()).value();
    CHECK(std::abs(mu_sphere(te, metal) - ideal_te) / std::abs(ideal_te) < 1e-2);

    const SphericalMode tm{Polarization::tm, 1};
    // ideal-mirror TM ratio (pi/2)(-1)^l (R i_l)' / (R k_l)' at l = 1
    const double ri = (pair.i.value + 1.0 * pair.i.derivative);
    const double rk = (pair.k.value + 1.0 * pair.k.derivative);
    const double ideal_tm = -(M_PI / 2.0) * ri / rk * std::exp(pair.i.log_scale -
                                                               pair.k.log_scale);
    CHECK(std::abs(mu_sphere(tm, metal) - ideal_tm) / std::abs(ideal_tm) < 1e-2);
}

TEST_CASE("exterior scattered amplitude") {
    const SphericalMode te{Polarization::te, 1};
    CHECK(exterior_greens_scattered(te, make_channel(1.0, 1.0, 1.0), 2.0, 2.0) == 0.0);

    const auto ch = make_channel(1.0, 1.0, 4.0);
    CHECK(exterior_greens_scattered(te, ch, 2.0, 3.0) ==
          doctest::Approx(exterior_greens_scattered(te, ch, 3.0, 2.0)).epsilon(1e-14));

    // composition from mu and the decaying radial functions
    const double k2 = reduced(BesselKind::h1, 1, 2.0);
    const double expected = mu_sphere(te, ch) * (4.0 / (M_PI * M_PI)) * (-1.0) * k2 * k2;
    CHECK(exterior_greens_scattered(te, ch, 2.0, 2.0) ==
          doctest::Approx(expected).epsilon(1e-12));

    CHECK_THROWS_AS(exterior_greens_scattered(te, ch, 0.5, 2.0), std::domain_error);
}

TEST_CASE("channel validation") {
    CHECK_THROWS_AS(make_channel(0.0, 1.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_channel(1.0, 0.0, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_channel(1.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(gamma_sphere({Polarization::te, 0}, make_channel(1.0, 1.0, 2.0)),
                    std::invalid_argument);
}
