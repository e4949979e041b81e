#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "casimir/numerics.hpp"

namespace casimir::dipole {

/// Finite collection of point dipoles. site_alpha0 carries volume units
/// (length^3); the continuum map is alpha0_density = n * a0 with n the
/// number density. The exclusion distance is the hard short-range cutoff:
/// pairs closer than it do not couple.
struct DipoleLattice {
    std::vector<Eigen::Vector3d> sites;
    std::vector<double> site_alpha0;
    double exclusion = 0.0;
    std::string label;
};

DipoleLattice make_lattice(std::vector<Eigen::Vector3d> sites, double alpha0, double exclusion,
                           std::string label = "");

/// nx x ny x nz cubic lattice, exclusion equal to the spacing.
DipoleLattice cubic_slab(int nx, int ny, int nz, double spacing, double alpha0,
                         const Eigen::Vector3d& origin = Eigen::Vector3d::Zero(),
                         std::string label = "");

/// Uniform random sites in a box with minimum-distance rejection.
DipoleLattice random_cloud(int n, const Eigen::Vector3d& lo, const Eigen::Vector3d& hi,
                           double min_distance, double alpha0, std::uint64_t seed,
                           std::string label = "");

DipoleLattice translated(const DipoleLattice& lattice, const Eigen::Vector3d& shift);
DipoleLattice rotated(const DipoleLattice& lattice, const Eigen::Matrix3d& rotation);

/// Retarded dipole-dipole kernel on the imaginary axis,
///   D_ij(iu, x) = e^{-ur}/(4 pi r^3) [ (3 + 3ur + u^2 r^2) n_i n_j
///                                     - (1 + ur + u^2 r^2) delta_ij ].
/// At u = 0 this is the static dipole tensor (3 n n - 1)/(4 pi r^3); the
/// kernel's contact part -(1/3) delta(x) never enters site pairs and is
/// accounted for analytically in depolarization_integral.
Eigen::Matrix3d dyadic_kernel(double u, const Eigen::Vector3d& dx);

/// 3N x 3N symmetric coupling matrix: block (i,j) =
/// sqrt(a0_i a0_j) D(iu, x_i - x_j) for coupled pairs, zero diagonal.
/// (For uniform a0 this is a0 D; the symmetrized form shares its spectrum.)
struct CouplingMatrix {
    Eigen::MatrixXd m;
    double u = 0.0;
};

CouplingMatrix build_coupling(const DipoleLattice& lattice, double u);

double spectral_radius(const CouplingMatrix& coupling);

/// F(u) = (1/2) logdet(I - M(u)); requires spectral radius < 1 and throws
/// num::NonConvergence (reporting the radius) otherwise.
double free_energy_spectral(const DipoleLattice& lattice, double u);

/// Truncated power series -(1/2) sum_{n=2}^{n_max} Tr(M^n)/n.
double free_energy_series(const DipoleLattice& lattice, double u, int n_max);

struct SplitFreeEnergy {
    double f_a = 0.0;
    double f_b = 0.0;
    double f_ab = 0.0;
};

/// Block decomposition for two disjoint bodies. The identity
/// F(union) = F_A + F_B + F_AB holds to machine precision.
SplitFreeEnergy split_free_energy(const DipoleLattice& a, const DipoleLattice& b, double u);

/// Frequency summation controls for thermal quantities. frequency_scale
/// sets the decay scale of the T = 0 frequency integral (roughly the
/// inverse body separation).
struct ThermalSpec {
    num::QuadratureSpec quad;
    num::SumSpec sum;
    double frequency_scale = 1.0;
};

/// T > 0: T sum_m (2 - delta_m0) F(u_m); T = 0: (1/pi) int_0^inf F(u) du.
double total_free_energy(const DipoleLattice& lattice, double temperature,
                         const ThermalSpec& spec = {});
num::Estimate total_free_energy_est(const DipoleLattice& lattice, double temperature,
                                    const ThermalSpec& spec = {});

/// The interaction part F_AB alone, summed over frequencies.
double interaction_free_energy(const DipoleLattice& a, const DipoleLattice& b,
                               double temperature, const ThermalSpec& spec = {});
num::Estimate interaction_free_energy_est(const DipoleLattice& a, const DipoleLattice& b,
                                          double temperature, const ThermalSpec& spec = {});

/// Central difference -[E_AB(+h) - E_AB(-h)]/(2h) of the interaction energy
/// under displacement of body B along the given axis (0, 1 or 2).
double force_between(const DipoleLattice& a, const DipoleLattice& b, int axis, double h,
                     double temperature, const ThermalSpec& spec = {});

/// Least-squares slope of log|E(d)| vs log d for a two-dipole system with
/// per-site polarizability a0 at the given separations.
double casimir_polder_exponent(double a0, const std::vector<double>& separations,
                               double temperature, const ThermalSpec& spec = {});

/// Integral of the dyadic kernel over a ball of radius a, including the
/// -(1/3) delta contact contribution; the x != 0 part reduces to an
/// analytic angular factor times a numeric radial integral. Tends to
/// -(1/3) I as u a -> 0.
Eigen::Matrix3d depolarization_integral(double u, double a,
                                        const num::QuadratureSpec& spec = {});

}  // namespace casimir::dipole
