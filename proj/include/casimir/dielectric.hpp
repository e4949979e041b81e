#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

namespace casimir {

// Natural units throughout: hbar = c = k_B = 1. Lengths carry an arbitrary
// unit L, frequencies 1/L, temperatures 1/L, pressures 1/L^4.

enum class ModelKind { plasma, oscillator, constant_epsilon, tabulated };

/// Atomic polarizability density alpha0(iu) evaluated on the imaginary
/// frequency axis. alpha0 is dimensionless (density form); the discrete
/// per-site volume form lives in the dipole module.
struct PolarizabilityModel {
    ModelKind kind = ModelKind::constant_epsilon;
    double plasma_frequency = 0.0;      // u_p, plasma kind
    double oscillator_static = 0.0;     // alpha_s, oscillator kind
    double oscillator_frequency = 0.0;  // u0, oscillator kind
    double epsilon_constant = 1.0;      // constant_epsilon kind
    std::vector<std::pair<double, double>> table;  // (u, alpha0), sorted in u

    static PolarizabilityModel plasma(double u_p);
    static PolarizabilityModel oscillator(double alpha_s, double u0);
    static PolarizabilityModel constant_eps(double eps);
    static PolarizabilityModel tabulated(std::vector<std::pair<double, double>> samples);
};

/// Permittivity value or the distinguished metallic marker (the pole of the
/// Lorentz-Lorenz map at alpha0 = 3). Downstream reflection formulas take
/// analytic limits instead of dividing infinities.
class DielectricResponse {
public:
    static DielectricResponse metallic() { return DielectricResponse(0.0, true); }
    static DielectricResponse finite(double eps) {
        if (!(eps >= 1.0))
            throw std::invalid_argument("DielectricResponse: epsilon must be >= 1");
        return DielectricResponse(eps, false);
    }
    bool is_metallic() const { return metallic_; }
    double value() const {
        if (metallic_) throw std::logic_error("DielectricResponse: metallic marker has no value");
        return eps_;
    }

private:
    DielectricResponse(double e, double m) : eps_(e), metallic_(m) {}
    double eps_;
    bool metallic_;
};

/// alpha0(iu) per model kind; plasma returns u_p^2 / (u^2 + u_p^2/3).
double eval_alpha0(const PolarizabilityModel& model, double u);

/// epsilon = 1 + alpha0/(1 - alpha0/3); alpha0 = 3 is the metallic pole,
/// alpha0 > 3 is rejected as unphysical.
DielectricResponse lorentz_lorenz(double alpha0);

/// Algebraic inverse: alpha0 = 3(eps - 1)/(eps + 2).
double inverse_lorentz_lorenz(double epsilon);

/// Composition of the two maps. The plasma kind uses the algebraically
/// identical closed form 1 + u_p^2/u^2, which stays conditioned at small u.
DielectricResponse eval_epsilon(const PolarizabilityModel& model, double u);

}  // namespace casimir
