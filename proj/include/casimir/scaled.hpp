#pragma once

#include <cmath>

namespace casimir {

/// A real number held as mantissa * exp(log_scale). Keeps products of
/// exponentially large and small factors (Bessel values, loop quantities)
/// inside double range; exponents combine additively and are only
/// exponentiated at the end.
struct Scaled {
    double mantissa = 0.0;
    double log_scale = 0.0;

    static Scaled from(double v) { return Scaled{v, 0.0}.normalized(); }

    double value() const {
        if (mantissa == 0.0) return 0.0;
        return mantissa * std::exp(log_scale);
    }

    Scaled normalized() const {
        if (mantissa == 0.0 || !std::isfinite(mantissa)) return {mantissa, 0.0};
        int n = 0;
        const double m = std::frexp(mantissa, &n);
        return {m, log_scale + n * M_LN2};
    }

    Scaled operator*(const Scaled& o) const {
        return Scaled{mantissa * o.mantissa, log_scale + o.log_scale}.normalized();
    }
    Scaled operator*(double s) const { return Scaled{mantissa * s, log_scale}.normalized(); }
    Scaled operator/(const Scaled& o) const {
        return Scaled{mantissa / o.mantissa, log_scale - o.log_scale}.normalized();
    }
    Scaled operator-() const { return {-mantissa, log_scale}; }

    Scaled operator+(const Scaled& o) const {
        if (mantissa == 0.0) return o;
        if (o.mantissa == 0.0) return *this;
        const double top = std::max(log_scale, o.log_scale);
        const double m =
            mantissa * std::exp(log_scale - top) + o.mantissa * std::exp(o.log_scale - top);
        return Scaled{m, top}.normalized();
    }
    Scaled operator-(const Scaled& o) const { return *this + (-o); }
};

}  // namespace casimir
