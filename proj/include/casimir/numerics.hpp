#pragma once

#include <functional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace casimir::num {

/// Thrown when an adaptive routine cannot reach its target tolerance.
/// Carries the best available estimate so callers can report diagnostics.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double best, double err)
        : std::runtime_error(what), best_estimate(best), error_estimate(err) {}
    double best_estimate;
    double error_estimate;
};

/// A computed value with its self-reported absolute error estimate.
struct Estimate {
    double value = 0.0;
    double error = 0.0;
};

struct QuadratureSpec {
    double rel_tol = 1e-9;
    double abs_floor = 1e-300;  // accept once the absolute error drops below this
    int max_subdivisions = 4000;
};

struct QuadResult {
    double value = 0.0;
    double error = 0.0;  // self-reported absolute error estimate
    int panels = 0;
};

using Integrand = std::function<double(double)>;

/// Adaptive Gauss-Kronrod (7-15) panel integration on [a, b].
QuadResult integrate_finite(const Integrand& f, double a, double b,
                            const QuadratureSpec& spec = {});

/// Integral over [0, inf) via the rational map u = scale * s / (1 - s).
/// `scale` should be of the order of the integrand's decay length.
QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec = {},
                                   double scale = 1.0);

struct SumSpec {
    int max_index = 200000;
    double rel_tol = 1e-10;
    int min_terms = 8;  // never stop before this many terms
};

struct SumResult {
    double value = 0.0;          // partial sum plus geometric tail extrapolation
    double tail_estimate = 0.0;  // magnitude of the extrapolated tail
    int terms_used = 0;
};

/// temperature * sum_{m>=0} (2 - delta_{m0}) f(u_m) with u_m = 2*pi*m*temperature.
/// The m -> infinity tail is estimated by geometric extrapolation of the
/// last term ratio; terms must eventually decay or NonConvergence is thrown.
SumResult matsubara_sum(const Integrand& f, double temperature, const SumSpec& spec = {});

/// Log-determinant of a symmetric positive definite matrix via a pivoted
/// LDL^T factorization. A non-positive pivot throws NonConvergence; this is
/// the signal dipole configurations use to detect a divergent expansion.
double logdet_spd(const Eigen::MatrixXd& a);

}  // namespace casimir::num
