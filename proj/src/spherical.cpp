#include "casimir/spherical.hpp"

#include <cmath>
#include <stdexcept>

namespace casimir::spherical {

namespace {

BesselValue eval_kind(BesselKind kind, int l, double x) {
    const BesselPair pair = modified_sph_bessel(l, x);
    return kind == BesselKind::j ? pair.i : pair.k;
}

void check_channel(const BallChannel& ch) {
    if (!(ch.radius > 0.0 && ch.u > 0.0 && ch.eps >= 1.0))
        throw std::invalid_argument("BallChannel: requires R > 0, u > 0, eps >= 1");
}

void check_mode(const SphericalMode& mode) {
    if (mode.l < 1) throw std::invalid_argument("SphericalMode: l must be >= 1");
}

double parity(int l) { return (l % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

BallChannel make_channel(double radius, double u, double eps) {
    BallChannel ch{radius, u, eps};
    check_channel(ch);
    return ch;
}

Scaled bilinear1_bracket(BesselKind f, BesselKind g, int l, const BallChannel& ch, double rho) {
    check_channel(ch);
    if (!(rho > 0.0)) throw std::invalid_argument("bilinear1_bracket: rho must be > 0");
    const double se = std::sqrt(ch.eps);
    const BesselValue fv = eval_kind(f, l, ch.u * rho);
    const BesselValue gv = eval_kind(g, l, se * ch.u * rho);
    const Scaled bracket = fv.deriv() * gv.val() - (fv.val() * gv.deriv()) * se;
    return bracket * (-rho * rho / ch.u);
}

Scaled bilinear_form_1(BesselKind f, BesselKind g, int l, const BallChannel& ch) {
    return bilinear1_bracket(f, g, l, ch, ch.radius);
}

Scaled bilinear2_boundary(BesselKind f, BesselKind g, int l, const BallChannel& ch, double rho) {
    check_channel(ch);
    if (!(rho > 0.0)) throw std::invalid_argument("bilinear2_boundary: rho must be > 0");
    const double se = std::sqrt(ch.eps);
    const BesselValue fv = eval_kind(f, l, ch.u * rho);
    const BesselValue gv = eval_kind(g, l, se * ch.u * rho);
    // d/drho (rho F(u rho)) = F + u rho F'
    const Scaled dr = fv.val() + fv.deriv() * (ch.u * rho);
    return dr * gv.val() * (ch.alpha() * rho);
}

Scaled bilinear_form_2(BesselKind f, BesselKind g, int l, const BallChannel& ch) {
    const Scaled boundary = bilinear2_boundary(f, g, l, ch, ch.radius);
    const Scaled b1 = bilinear_form_1(f, g, l, ch);
    return boundary - b1 * (ch.u * ch.u);
}

double bilinear_form_1_raw(BesselKind f, BesselKind g, int l, const BallChannel& ch) {
    if (ch.eps == 1.0)
        throw std::domain_error("bilinear_form_1_raw: 0/0 at eps = 1, use the B form");
    return (bilinear_form_1(f, g, l, ch) * (1.0 / ch.alpha())).value();
}

double bilinear_form_2_raw(BesselKind f, BesselKind g, int l, const BallChannel& ch) {
    if (ch.eps == 1.0)
        throw std::domain_error("bilinear_form_2_raw: 0/0 at eps = 1, use the B form");
    return (bilinear_form_2(f, g, l, ch) * (1.0 / ch.alpha())).value();
}

namespace {

struct LoopParts {
    Scaled numerator;   // B[j,j] * B[j,h] with the mode's frequency factor
    Scaled gamma_term;  // alpha^2 gamma as a Scaled
};

LoopParts loop_parts(const SphericalMode& mode, const BallChannel& ch) {
    const int l = mode.l;
    const double se = std::sqrt(ch.eps);
    const double u2 = ch.u * ch.u;
    // TE carries sqrt(eps) w^6 -> -sqrt(eps) u^6, TM carries w^2/sqrt(eps).
    const double freq_factor =
        (mode.lambda == Polarization::te) ? -se * u2 * u2 * u2 : -u2 / se;

    Scaled jj, hh, jh;
    if (mode.lambda == Polarization::te) {
        jj = bilinear_form_1(BesselKind::j, BesselKind::j, l, ch);
        hh = bilinear_form_1(BesselKind::h1, BesselKind::h1, l, ch);
        jh = bilinear_form_1(BesselKind::j, BesselKind::h1, l, ch);
    } else {
        jj = bilinear_form_2(BesselKind::j, BesselKind::j, l, ch);
        hh = bilinear_form_2(BesselKind::h1, BesselKind::h1, l, ch);
        jh = bilinear_form_2(BesselKind::j, BesselKind::h1, l, ch);
    }

    LoopParts parts;
    // h-phase dictionary: each h slot contributes -(2/pi)(-i)^l; pairs of
    // them give (4/pi^2)(-1)^l, one j one h gives -(2/pi); j pairs (-1)^l.
    parts.gamma_term = jj * hh * (freq_factor * 4.0 / (M_PI * M_PI));
    parts.numerator = jj * jh * (freq_factor * 2.0 / M_PI * parity(l));
    return parts;
}

}  // namespace

double gamma_sphere(const SphericalMode& mode, const BallChannel& ch) {
    check_mode(mode);
    check_channel(ch);
    if (ch.eps == 1.0) return 0.0;
    return loop_parts(mode, ch).gamma_term.value();
}

double mu_sphere(const SphericalMode& mode, const BallChannel& ch) {
    check_mode(mode);
    check_channel(ch);
    if (ch.eps == 1.0) return 0.0;
    const LoopParts parts = loop_parts(mode, ch);
    const double denominator = 1.0 + parts.gamma_term.value();
    if (!(denominator > 0.0))
        throw std::runtime_error("mu_sphere: resonant denominator on the imaginary axis");
    return parts.numerator.value() / denominator;
}

double exterior_greens_scattered(const SphericalMode& mode, const BallChannel& ch, double r,
                                 double rp) {
    check_mode(mode);
    check_channel(ch);
    if (!(r > ch.radius && rp > ch.radius))
        throw std::domain_error("exterior_greens_scattered: requires r, rp > R");
    if (ch.eps == 1.0) return 0.0;
    const double mu = mu_sphere(mode, ch);
    const Scaled kr = eval_kind(BesselKind::h1, mode.l, ch.u * r).val();
    const Scaled krp = eval_kind(BesselKind::h1, mode.l, ch.u * rp).val();
    const double u3 = ch.u * ch.u * ch.u;
    return (kr * krp * (mu * u3 * 4.0 / (M_PI * M_PI) * parity(mode.l))).value();
}

}  // namespace casimir::spherical
