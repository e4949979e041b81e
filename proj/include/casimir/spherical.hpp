#pragma once

#include "casimir/bessel.hpp"
#include "casimir/dielectric.hpp"
#include "casimir/scaled.hpp"

namespace casimir::spherical {

enum class Polarization { te, tm };

enum class BesselKind { j, h1 };  // carried as the modified functions i_l, k_l

/// One (l >= 1) multipole channel; l = 0 carries no transverse mode.
struct SphericalMode {
    Polarization lambda = Polarization::te;
    int l = 1;
    double q() const { return l * (l + 1.0); }
};

/// Dielectric ball of radius R probed at imaginary frequency u > 0.
/// x0 = u R and x1 = sqrt(eps) u R are the vacuum and medium arguments.
struct BallChannel {
    double radius = 1.0;
    double u = 1.0;
    double eps = 1.0;

    double x0() const { return u * radius; }
    double x1() const { return std::sqrt(eps) * u * radius; }
    double alpha() const { return eps - 1.0; }
};

BallChannel make_channel(double radius, double u, double eps);

/// Radial boundary bracket of the first bilinear form at radius rho,
///   b1(rho) = -(rho^2/u) [F'(u rho) G(x1 rho/R) - sqrt(eps) F(u rho) G'(...)]
/// in the real modified-function convention (kind j -> i_l, h1 -> k_l; the
/// i^l phases are folded into the gamma/mu assembly). b1 at R equals
/// alpha * <f,g>_1; for pairs regular at the origin the 0-end bracket
/// vanishes and alpha int_0^R rho^2 f g = b1(R).
Scaled bilinear1_bracket(BesselKind f, BesselKind g, int l, const BallChannel& ch, double rho);

/// B1[f,g] = alpha <f,g>_1, the bracket at the ball surface.
Scaled bilinear_form_1(BesselKind f, BesselKind g, int l, const BallChannel& ch);

/// alpha * d/drho(rho F(u rho)) * rho G(sqrt(eps) u rho) at radius rho,
/// the boundary product of the second bilinear form.
Scaled bilinear2_boundary(BesselKind f, BesselKind g, int l, const BallChannel& ch, double rho);

/// B2[f,g] = alpha <f,g>_2 = b2(R) - u^2 B1[f,g].
Scaled bilinear_form_2(BesselKind f, BesselKind g, int l, const BallChannel& ch);

/// Raw forms <f,g> = B/alpha; singular at eps = 1.
double bilinear_form_1_raw(BesselKind f, BesselKind g, int l, const BallChannel& ch);
double bilinear_form_2_raw(BesselKind f, BesselKind g, int l, const BallChannel& ch);

/// Dimensionless loop quantity alpha^2 gamma_{lambda l}:
///   TE: -sqrt(eps) u^6 (4/pi^2) B1[h,h] B1[j,j]
///   TM: -(u^2/sqrt(eps)) (4/pi^2) B2[h,h] B2[j,j]
/// (the (4/pi^2) and sign absorb the h-function phases). Regular at eps = 1.
double gamma_sphere(const SphericalMode& mode, const BallChannel& ch);

/// Scattering-loop coefficient of the exterior Green's function,
///   mu_1l = -sqrt(eps) u^6 (2/pi)(-1)^l B1[j,j] B1[j,h] / (1 + a^2 g_1)
/// and the TM analogue with u^2/sqrt(eps) and B2 forms. The (-1)^l is the
/// phase convention inherited from h^(1); the physical exterior product
/// mu * (i w^3) h h is phase free. In the metallic limit mu_1l tends to
/// the ideal-mirror ratio (pi/2)(-1)^l i_l(uR)/k_l(uR) = -j_l(wR)/h_l(wR).
double mu_sphere(const SphericalMode& mode, const BallChannel& ch);

/// Additive scattered term of the exterior Green's function at radii
/// r, rp > R: mu * u^3 * (4/pi^2)(-1)^l k_l(u r) k_l(u rp). The free part
/// in the same real convention is -(2/pi) u^3 k_l(u r_>) i_l(u r_<).
double exterior_greens_scattered(const SphericalMode& mode, const BallChannel& ch, double r,
                                 double rp);

}  // namespace casimir::spherical
