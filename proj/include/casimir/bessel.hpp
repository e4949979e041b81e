#pragma once

#include "casimir/scaled.hpp"

namespace casimir::spherical {

// All spherical-mode arguments in this project sit on the imaginary axis,
// z = i x with x > 0, so the Bessel functions of the first and third kind
// are carried as the real modified functions
//     j_l(i x)     = i^l                 * i_l(x)
//     h^(1)_l(i x) = -(2/pi) * (-i)^l    * k_l(x)
// together with this phase dictionary. The i^l phases cancel in every
// physical combination; the gamma/mu assembly folds them in analytically.

/// Modified spherical Bessel function with derivative, value and
/// derivative sharing one exponent: f = value * e^{log_scale}.
struct BesselValue {
    double value = 0.0;
    double derivative = 0.0;
    double log_scale = 0.0;

    Scaled val() const { return Scaled{value, log_scale}.normalized(); }
    Scaled deriv() const { return Scaled{derivative, log_scale}.normalized(); }
};

struct BesselPair {
    BesselValue i;  // regular solution, grows like e^x / (2x)
    BesselValue k;  // decaying solution, ~ (pi/2x) e^{-x}
};

/// i_l(x) and k_l(x) with derivatives, by series / downward recurrence for
/// i_l and upward recurrence for k_l, exponent-scaled. Every returned pair
/// is validated against the Wronskian i_l k_l' - i_l' k_l = -pi/(2 x^2);
/// persistent failure throws std::range_error naming (l, x).
BesselPair modified_sph_bessel(int l, double x);

/// Wronskian residual |(i k' - i' k) + pi/(2x^2)| / (pi/(2x^2)) of a pair.
double wronskian_residual(const BesselPair& pair, double x);

}  // namespace casimir::spherical
