#include "casimir/dipole.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "casimir/parallel.hpp"

namespace casimir::dipole {

namespace {

// Guard against 1-ulp wobble when site distances hit the cutoff exactly
// (cubic lattices couple their nearest neighbours at r == spacing).
bool pair_coupled(double r, double exclusion) { return r >= exclusion * (1.0 - 1e-12); }

void validate(const DipoleLattice& lattice) {
    if (lattice.sites.empty()) throw std::invalid_argument("DipoleLattice: no sites");
    if (lattice.sites.size() != lattice.site_alpha0.size())
        throw std::invalid_argument("DipoleLattice: per-site polarizability size mismatch");
    for (double a0 : lattice.site_alpha0)
        if (!(a0 >= 0.0)) throw std::invalid_argument("DipoleLattice: a0 must be >= 0");
    if (!(lattice.exclusion >= 0.0))
        throw std::invalid_argument("DipoleLattice: exclusion must be >= 0");
    const std::size_t n = lattice.sites.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const double r = (lattice.sites[i] - lattice.sites[j]).norm();
            if (r == 0.0) throw std::invalid_argument("DipoleLattice: coincident sites");
            if (!pair_coupled(r, lattice.exclusion))
                throw std::invalid_argument(
                    "DipoleLattice: pair distance below the claimed cutoff");
        }
}

double min_inter_distance(const DipoleLattice& a, const DipoleLattice& b) {
    double d = INFINITY;
    for (const auto& xa : a.sites)
        for (const auto& xb : b.sites) d = std::min(d, (xa - xb).norm());
    return d;
}

}  // namespace

DipoleLattice make_lattice(std::vector<Eigen::Vector3d> sites, double alpha0, double exclusion,
                           std::string label) {
    DipoleLattice lattice;
    lattice.site_alpha0.assign(sites.size(), alpha0);
    lattice.sites = std::move(sites);
    lattice.exclusion = exclusion;
    lattice.label = std::move(label);
    validate(lattice);
    return lattice;
}

DipoleLattice cubic_slab(int nx, int ny, int nz, double spacing, double alpha0,
                         const Eigen::Vector3d& origin, std::string label) {
    if (nx < 1 || ny < 1 || nz < 1 || !(spacing > 0.0))
        throw std::invalid_argument("cubic_slab: bad dimensions");
    std::vector<Eigen::Vector3d> sites;
    sites.reserve(static_cast<std::size_t>(nx) * ny * nz);
    for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j)
            for (int k = 0; k < nz; ++k)
                sites.push_back(origin + spacing * Eigen::Vector3d(i, j, k));
    return make_lattice(std::move(sites), alpha0, spacing, std::move(label));
}

DipoleLattice random_cloud(int n, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                           double min_distance, double alpha0, std::uint64_t seed,
                           std::string label) {
    if (n < 1) throw std::invalid_argument("random_cloud: n must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(lo.x(), hi.x()), uy(lo.y(), hi.y()),
        uz(lo.z(), hi.z());
    std::vector<Eigen::Vector3d> sites;
    sites.reserve(n);
    int attempts = 0;
    while (static_cast<int>(sites.size()) < n) {
        if (++attempts > 100000 * n)
            throw std::runtime_error("random_cloud: rejection sampling stalled");
        Eigen::Vector3d x(ux(rng), uy(rng), uz(rng));
        bool ok = true;
        for (const auto& s : sites)
            if ((s - x).norm() < min_distance) {
                ok = false;
                break;
            }
        if (ok) sites.push_back(x);
    }
    return make_lattice(std::move(sites), alpha0, min_distance, std::move(label));
}

DipoleLattice translated(const DipoleLattice& lattice, const Eigen::Vector3d& shift) {
    DipoleLattice out = lattice;
    for (auto& s : out.sites) s += shift;
    return out;
}

DipoleLattice rotated(const DipoleLattice& lattice, const Eigen::Matrix3d& rotation) {
    DipoleLattice out = lattice;
    for (auto& s : out.sites) s = rotation * s;
    return out;
}

Eigen::Matrix3d dyadic_kernel(double u, const Eigen::Vector3d& dx) {
    const double r = dx.norm();
    if (!(r > 0.0)) throw std::domain_error("dyadic_kernel: dx must be nonzero");
    if (!(u >= 0.0)) throw std::invalid_argument("dyadic_kernel: u must be >= 0");
    const double ur = u * r;
    const double pref = std::exp(-ur) / (4.0 * M_PI * r * r * r);
    const Eigen::Vector3d n = dx / r;
    const double cn = 3.0 + 3.0 * ur + ur * ur;
    const double cd = 1.0 + ur + ur * ur;
    return pref * (cn * (n * n.transpose()) - cd * Eigen::Matrix3d::Identity());
}

CouplingMatrix build_coupling(const DipoleLattice& lattice, double u) {
    validate(lattice);
    const std::size_t n = lattice.sites.size();
    CouplingMatrix coupling;
    coupling.u = u;
    coupling.m = Eigen::MatrixXd::Zero(3 * n, 3 * n);
    parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Eigen::Vector3d dx = lattice.sites[i] - lattice.sites[j];
            if (!pair_coupled(dx.norm(), lattice.exclusion)) continue;
            const double w = std::sqrt(lattice.site_alpha0[i] * lattice.site_alpha0[j]);
            if (w == 0.0) continue;
            const Eigen::Matrix3d block = w * dyadic_kernel(u, dx);
            coupling.m.block<3, 3>(3 * i, 3 * j) = block;
            coupling.m.block<3, 3>(3 * j, 3 * i) = block.transpose();
        }
    });
    return coupling;
}

double spectral_radius(const CouplingMatrix& coupling) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(coupling.m,
                                                          Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    return std::max(std::abs(ev.minCoeff()), std::abs(ev.maxCoeff()));
}

namespace {

// logdet(I - M) with the convergence contract: a failed pivot on I -+ M
// means spectral radius >= 1.
double logdet_one_minus(const CouplingMatrix& coupling) {
    const Eigen::Index n = coupling.m.rows();
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n, n);
    try {
        const double value = num::logdet_spd(identity - coupling.m);
        (void)num::logdet_spd(identity + coupling.m);
        return value;
    } catch (const num::NonConvergence&) {
        const double radius = spectral_radius(coupling);
        throw num::NonConvergence("dipole expansion divergent: spectral radius " +
                                      std::to_string(radius) + " at u = " +
                                      std::to_string(coupling.u),
                                  0.0, radius);
    }
}

}  // namespace

double free_energy_spectral(const DipoleLattice& lattice, double u) {
    return 0.5 * logdet_one_minus(build_coupling(lattice, u));
}

double free_energy_series(const DipoleLattice& lattice, double u, int n_max) {
    if (n_max < 2) throw std::invalid_argument("free_energy_series: n_max must be >= 2");
    const CouplingMatrix coupling = build_coupling(lattice, u);
    Eigen::MatrixXd power = coupling.m;
    double sum = 0.0;
    for (int n = 2; n <= n_max; ++n) {
        power = (power * coupling.m).eval();
        sum += power.trace() / n;
    }
    return -0.5 * sum;
}

SplitFreeEnergy split_free_energy(const DipoleLattice& a, const DipoleLattice& b, double u) {
    validate(a);
    validate(b);
    const double gap = min_inter_distance(a, b);
    if (!(gap > 0.0)) throw std::invalid_argument("split_free_energy: bodies overlap");

    const std::size_t na = a.sites.size(), nb = b.sites.size();
    DipoleLattice all;
    all.sites = a.sites;
    all.sites.insert(all.sites.end(), b.sites.begin(), b.sites.end());
    all.site_alpha0 = a.site_alpha0;
    all.site_alpha0.insert(all.site_alpha0.end(), b.site_alpha0.begin(), b.site_alpha0.end());
    all.exclusion = std::min(a.exclusion, b.exclusion);
    const CouplingMatrix full = build_coupling(all, u);

    const Eigen::MatrixXd m_aa = full.m.topLeftCorner(3 * na, 3 * na);
    const Eigen::MatrixXd m_bb = full.m.bottomRightCorner(3 * nb, 3 * nb);
    const Eigen::MatrixXd m_ab = full.m.topRightCorner(3 * na, 3 * nb);

    const Eigen::MatrixXd id_a = Eigen::MatrixXd::Identity(3 * na, 3 * na);
    const Eigen::MatrixXd id_b = Eigen::MatrixXd::Identity(3 * nb, 3 * nb);

    SplitFreeEnergy result;
    result.f_a = 0.5 * logdet_one_minus(CouplingMatrix{m_aa, u});
    result.f_b = 0.5 * logdet_one_minus(CouplingMatrix{m_bb, u});

    // F_AB = (1/2) logdet(I - (I-M_AA)^-1 M_AB (I-M_BB)^-1 M_BA), evaluated
    // in the congruent symmetric form I - X X^T with X = L_A^-1 M_AB L_B^-T.
    Eigen::LLT<Eigen::MatrixXd> llt_a(id_a - m_aa);
    Eigen::LLT<Eigen::MatrixXd> llt_b(id_b - m_bb);
    if (llt_a.info() != Eigen::Success || llt_b.info() != Eigen::Success)
        throw num::NonConvergence("split_free_energy: isolated body expansion divergent", 0.0,
                                  INFINITY);
    Eigen::MatrixXd x = llt_a.matrixL().solve(m_ab);
    x = llt_b.matrixL().solve(x.transpose()).transpose().eval();
    result.f_ab = 0.5 * num::logdet_spd(Eigen::MatrixXd::Identity(3 * na, 3 * na) -
                                        x * x.transpose());
    return result;
}

namespace {

num::Estimate thermal_reduce(const num::Integrand& density, double temperature,
                             const ThermalSpec& spec) {
    if (temperature > 0.0) {
        const auto res = num::matsubara_sum(density, temperature, spec.sum);
        return {res.value, res.tail_estimate};
    }
    const auto res = num::integrate_semi_infinite(density, spec.quad, spec.frequency_scale);
    return {res.value / M_PI, res.error / M_PI};
}

}  // namespace

num::Estimate total_free_energy_est(const DipoleLattice& lattice, double temperature,
                                    const ThermalSpec& spec) {
    return thermal_reduce([&](double u) { return free_energy_spectral(lattice, u); },
                          temperature, spec);
}

double total_free_energy(const DipoleLattice& lattice, double temperature,
                         const ThermalSpec& spec) {
    return total_free_energy_est(lattice, temperature, spec).value;
}

num::Estimate interaction_free_energy_est(const DipoleLattice& a, const DipoleLattice& b,
                                          double temperature, const ThermalSpec& spec) {
    return thermal_reduce([&](double u) { return split_free_energy(a, b, u).f_ab; },
                          temperature, spec);
}

double interaction_free_energy(const DipoleLattice& a, const DipoleLattice& b,
                               double temperature, const ThermalSpec& spec) {
    return interaction_free_energy_est(a, b, temperature, spec).value;
}

double force_between(const DipoleLattice& a, const DipoleLattice& b, int axis, double h,
                     double temperature, const ThermalSpec& spec) {
    if (axis < 0 || axis > 2) throw std::invalid_argument("force_between: axis must be 0..2");
    if (!(h > 0.0)) throw std::invalid_argument("force_between: h must be > 0");
    Eigen::Vector3d shift = Eigen::Vector3d::Zero();
    shift[axis] = h;
    const double e_plus = interaction_free_energy(a, translated(b, shift), temperature, spec);
    const double e_minus = interaction_free_energy(a, translated(b, -shift), temperature, spec);
    return -(e_plus - e_minus) / (2.0 * h);
}

double casimir_polder_exponent(double a0, const std::vector<double>& separations,
                               double temperature, const ThermalSpec& spec) {
    if (separations.size() < 2)
        throw std::invalid_argument("casimir_polder_exponent: need at least 2 separations");
    std::vector<double> logs_d, logs_e;
    for (double d : separations) {
        if (!(d > 0.0)) throw std::invalid_argument("casimir_polder_exponent: d must be > 0");
        DipoleLattice pair = make_lattice(
            {Eigen::Vector3d::Zero(), Eigen::Vector3d(0.0, 0.0, d)}, a0, 0.0, "pair");
        ThermalSpec local = spec;
        local.frequency_scale = 1.0 / d;
        const double e = total_free_energy(pair, temperature, local);
        if (!(std::abs(e) > 0.0))
            throw std::runtime_error("casimir_polder_exponent: vanishing pair energy");
        logs_d.push_back(std::log(d));
        logs_e.push_back(std::log(std::abs(e)));
    }
    const double n = static_cast<double>(logs_d.size());
    double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < logs_d.size(); ++i) {
        sx += logs_d[i];
        sy += logs_e[i];
        sxx += logs_d[i] * logs_d[i];
        sxy += logs_d[i] * logs_e[i];
    }
    const double denom = n * sxx - sx * sx;
    if (!(std::abs(denom) > 0.0))
        throw std::runtime_error("casimir_polder_exponent: degenerate fit");
    return (n * sxy - sx * sy) / denom;
}

Eigen::Matrix3d depolarization_integral(double u, double a, const num::QuadratureSpec& spec) {
    if (!(a > 0.0)) throw std::invalid_argument("depolarization_integral: a must be > 0");
    if (!(u >= 0.0)) throw std::invalid_argument("depolarization_integral: u must be >= 0");
    // Angular reduction of the x != 0 part: off-diagonals vanish and the
    // diagonal carries -(u^2/3) r e^{-ur}; the contact part contributes
    // the constant -(1/3).
    double radial = 0.0;
    if (u > 0.0)
        radial = num::integrate_finite([u](double r) { return r * std::exp(-u * r); }, 0.0, a,
                                       spec)
                     .value;
    const double diag = -1.0 / 3.0 - (u * u / 3.0) * radial;
    return diag * Eigen::Matrix3d::Identity();
}

}  // namespace casimir::dipole
