#include "casimir/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

namespace casimir::num {

namespace {

// Gauss-Kronrod 7-15 pair, positive abscissae. Odd indices are the
// embedded Gauss points.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Panel {
    double a, b;
    double value;
    double error;
};

struct PanelWorse {
    bool operator()(const Panel& x, const Panel& y) const {
        if (x.error != y.error) return x.error < y.error;
        return x.a < y.a;  // deterministic tie break
    }
};

Panel evaluate_panel(const Integrand& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);

    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - h * kXgk[i]);
        fv[14 - i] = f(c + h * kXgk[i]);
    }
    fv[7] = f(c);

    double kres = kWgk[7] * fv[7];
    double gres = kWg[3] * fv[7];
    double resabs = kWgk[7] * std::abs(fv[7]);
    for (int i = 0; i < 7; ++i) {
        kres += kWgk[i] * (fv[i] + fv[14 - i]);
        resabs += kWgk[i] * (std::abs(fv[i]) + std::abs(fv[14 - i]));
        if (i % 2 == 1) gres += kWg[i / 2] * (fv[i] + fv[14 - i]);
    }

    const double mean = 0.5 * kres;
    double resasc = kWgk[7] * std::abs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kWgk[i] * (std::abs(fv[i] - mean) + std::abs(fv[14 - i] - mean));

    double err = std::abs(kres - gres) * h;
    resasc *= h;
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));

    return Panel{a, b, kres * h, err};
}

}  // namespace

QuadResult integrate_finite(const Integrand& f, double a, double b,
                            const QuadratureSpec& spec) {
    if (!(b > a)) {
        if (b == a) return {0.0, 0.0, 0};
        throw std::invalid_argument("integrate_finite: requires b >= a");
    }

    std::priority_queue<Panel, std::vector<Panel>, PanelWorse> queue;
    Panel first = evaluate_panel(f, a, b);
    if (!std::isfinite(first.value))
        throw NonConvergence("integrate_finite: non-finite integrand", first.value, INFINITY);
    double total = first.value;
    double total_err = first.error;
    queue.push(first);
    std::vector<Panel> frozen;  // intervals at floating point resolution
    int panels = 1;

    auto tolerance = [&] { return std::max(spec.rel_tol * std::abs(total), spec.abs_floor); };

    while (total_err > tolerance()) {
        if (panels >= spec.max_subdivisions)
            throw NonConvergence("integrate_finite: panel budget exhausted", total, total_err);
        Panel worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // unsplittable; keep its value, stop counting its error
            total_err -= worst.error;
            worst.error = 0.0;
            frozen.push_back(worst);
            continue;
        }
        Panel left = evaluate_panel(f, worst.a, mid);
        Panel right = evaluate_panel(f, mid, worst.b);
        if (!std::isfinite(left.value) || !std::isfinite(right.value))
            throw NonConvergence("integrate_finite: non-finite integrand", total, total_err);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++panels;
    }

    // Deterministic reduction: re-sum panels ordered by position.
    std::vector<Panel> segs = std::move(frozen);
    segs.reserve(segs.size() + queue.size());
    while (!queue.empty()) {
        segs.push_back(queue.top());
        queue.pop();
    }
    std::sort(segs.begin(), segs.end(), [](const Panel& x, const Panel& y) { return x.a < y.a; });
    double value = 0.0, error = 0.0;
    for (const Panel& s : segs) {
        value += s.value;
        error += s.error;
    }
    return {value, error, panels};
}

QuadResult integrate_semi_infinite(const Integrand& f, const QuadratureSpec& spec,
                                   double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("integrate_semi_infinite: scale must be > 0");
    auto mapped = [&f, scale](double s) {
        const double om = 1.0 - s;
        const double u = scale * s / om;
        if (!std::isfinite(u)) return 0.0;
        const double jac = scale / (om * om);
        const double v = f(u);
        return v * jac;
    };
    return integrate_finite(mapped, 0.0, 1.0, spec);
}

}  // namespace casimir::num
