#pragma once

#include "casimir/dielectric.hpp"
#include "casimir/numerics.hpp"

namespace casimir::planar {

// All planar formulas are Wick-rotated once and for all: the mode functions
// live on the imaginary frequency axis w = iu and the longitudinal
// wavenumbers are real, kappa0 = sqrt(u^2 + p^2) in vacuum and
// kappa1 = sqrt(eps u^2 + p^2) in the medium. Phase factors e^{2 i s0 a}
// become real decaying exponentials e^{-2 kappa0 a}. Negative pressure
// means attraction.

enum class Mode { te, tm };

enum class ZeroModeTePolicy { microscopic_zero, lifshitz_limit, perfect_conductor };

struct FrequencyMomentumPoint {
    double u = 0.0;  // imaginary frequency, >= 0
    double p = 0.0;  // transverse momentum, >= 0
};

struct RotatedWavenumbers {
    double kappa0 = 0.0;
    double kappa1 = 0.0;  // +infinity for a metallic response at u > 0
};

struct ReflectionPair {
    double te = 0.0;  // in [-1, 0]
    double tm = 0.0;  // in [-1, 1]
};

/// Two dielectric half-spaces with a vacuum gap.
/// The perfect_conductor policy turns the cavity into ideal mirrors at
/// every frequency (r_te = -1, r_tm = +1), not just in the m = 0 term;
/// the material models are ignored in that case.
struct PlanarCavity {
    double gap = 1.0;
    PolarizabilityModel left = PolarizabilityModel::constant_eps(1.0);
    PolarizabilityModel right = PolarizabilityModel::constant_eps(1.0);
    double temperature = 0.0;
    ZeroModeTePolicy m0_te_policy = ZeroModeTePolicy::microscopic_zero;
    num::QuadratureSpec quad;
    num::SumSpec sum;
};

RotatedWavenumbers rotated_wavenumbers(const FrequencyMomentumPoint& pt,
                                       const DielectricResponse& eps);

/// Fresnel factors at one interface: r_te = -(k1-k0)/(k1+k0),
/// r_tm = -(k1-eps k0)/(k1+eps k0). Metallic response at u = 0 must be
/// routed through the zero-mode policy and is rejected here.
ReflectionPair reflection(const FrequencyMomentumPoint& pt, const DielectricResponse& eps);

/// TE reflection assigned to the u = 0 Matsubara term for one plate.
/// microscopic_zero returns 0 for every material. lifshitz_limit returns
/// the plasma-prescription limit for the plasma kind and 0 for any model
/// with finite eps(0). perfect_conductor returns -1.
double zero_mode_te_reflection(double p, const PolarizabilityModel& model,
                               ZeroModeTePolicy policy);

/// Reflections entering the loop at (u, p) for one side of the cavity,
/// with the u = 0 channel policy-gated (TM uses (eps0-1)/(eps0+1), or 1
/// for a metallic zero-frequency response).
ReflectionPair effective_reflection(const FrequencyMomentumPoint& pt,
                                    const PlanarCavity& cavity, bool left_side);

/// r_L r_R e^{-2 kappa0 a} / (1 - r_L r_R e^{-2 kappa0 a}) for one mode.
double mode_loop_factor(const FrequencyMomentumPoint& pt, const PlanarCavity& cavity,
                        Mode mode);

/// Spectral density of the pressure: -kappa0 (loop_te + loop_tm).
double pressure_integrand(const FrequencyMomentumPoint& pt, const PlanarCavity& cavity);

/// P(a) = (1/2 pi^2) int du int p dp pressure_integrand, units 1/L^4.
double pressure_zero_temperature(const PlanarCavity& cavity);
num::Estimate pressure_zero_temperature_est(const PlanarCavity& cavity);

/// P = (T/2 pi) sum_m (2 - delta_m0) int p dp pressure_integrand(u_m, p).
double pressure_finite_temperature(const PlanarCavity& cavity);
num::Estimate pressure_finite_temperature_est(const PlanarCavity& cavity);

/// F/A; uses the Matsubara sum for cavity.temperature > 0 and the
/// frequency integral at T = 0. -d(F/A)/da reproduces the pressure.
double free_energy_per_area(const PlanarCavity& cavity);
num::Estimate free_energy_per_area_est(const PlanarCavity& cavity);

struct GammaPlanar {
    double one_plate = 0.0;  // alpha^2 gamma for the single interface
    double two_plate = 0.0;  // r_lambda^2 e^{-2 kappa0 a}, equals the loop numerator
};

/// The multiplicative eigenvalue alpha^2 gamma_lambda of the composed
/// half-space kernels, in rotated variables:
///   TE one-plate  (kappa1-kappa0)^2 / (4 kappa1 kappa0)
///   TM one-plate  (kappa1-kappa0)^2 (p^2+kappa1 kappa0)^2 / (4 eps u^4 kappa1 kappa0)
/// both satisfying 1/(1+alpha^2 gamma) = 4 kappa1 kappa0/(kappa1+kappa0)^2
/// (times the TM momentum factor). The two-plate value is r^2 e^{-2 kappa0 a}.
GammaPlanar gamma_planar(const FrequencyMomentumPoint& pt, const DielectricResponse& eps,
                         Mode mode, double gap);

/// Composes the one-dimensional rotated kernels over the half-lines by
/// adaptive quadrature, divides by the kernel, and returns the relative
/// deviation from the closed-form one-plate alpha^2 gamma.
double verify_multiplicativity(const FrequencyMomentumPoint& pt, const DielectricResponse& eps,
                               Mode mode, const num::QuadratureSpec& spec = {});

/// Scalar mode amplitude of the in-gap Green's function (free part plus
/// single- and double-reflection images, geometrically resummed), overall
/// factor -u^2/(2 kappa0).
double greens_between_plates(double x, double xp, const FrequencyMomentumPoint& pt,
                             const PlanarCavity& cavity, Mode mode);

struct LongitudinalU0 {
    double transmitted = 0.0;  // (6 - 2 alpha0)/(6 + alpha0), 0 at alpha0 = 3
    double reflected = 0.0;    // 3 alpha0/(6 + alpha0) = (eps-1)/(eps+1), 1 at alpha0 = 3
};

/// Static longitudinal channel at u = 0 resummed in alpha0; the expansion
/// converges for alpha0 < 6.
LongitudinalU0 longitudinal_reflection_u0(double alpha0);

struct TeConvergence {
    double gamma = 0.0;
    bool converges = false;  // gamma < 1
};

/// Contraction factor of the metallic-limit TE expansion,
/// gamma = alpha0/3 - (alpha0/alpha)(kappa1-kappa0)^2/(4 kappa1 kappa0),
/// valid for p^2 > 2 u^2 > 0 or u = 0.
TeConvergence te_convergence_gamma(const FrequencyMomentumPoint& pt, double alpha0);

}  // namespace casimir::planar
