#include <doctest.h>

#include <cmath>

#include "casimir/dipole.hpp"

using namespace casimir;
using namespace casimir::dipole;

namespace {

Eigen::Matrix3d numeric_second_derivative(double u, const Eigen::Vector3d& x, int i, int j,
                                          double h) {
    // d_i d_j of the kernel by central differences, componentwise
    Eigen::Vector3d ei = Eigen::Vector3d::Zero(), ej = Eigen::Vector3d::Zero();
    ei[i] = h;
    ej[j] = h;
    return (dyadic_kernel(u, x + ei + ej) - dyadic_kernel(u, x + ei - ej) -
            dyadic_kernel(u, x - ei + ej) + dyadic_kernel(u, x - ei - ej)) /
           (4.0 * h * h);
}

}  // namespace

TEST_CASE("dyadic kernel static limit and trace anchors") {
    const Eigen::Vector3d dx(0.3, -0.7, 0.45);
    const double r = dx.norm();
    const Eigen::Vector3d n = dx / r;

    // u = 0: the static dipole tensor (3 n n - 1)/(4 pi r^3)
    const Eigen::Matrix3d expected =
        (3.0 * n * n.transpose() - Eigen::Matrix3d::Identity()) / (4.0 * M_PI * r * r * r);
    CHECK((dyadic_kernel(0.0, dx) - expected).norm() < 1e-15 * expected.norm());
    CHECK(std::abs(dyadic_kernel(0.0, dx).trace()) < 1e-16);

    // u > 0: trace is the Yukawa anchor -2 u^2 e^{-ur}/(4 pi r)
    const double u = 0.8;
    const double yukawa = std::exp(-u * r) / (4.0 * M_PI * r);
    CHECK(dyadic_kernel(u, dx).trace() ==
          doctest::Approx(-2.0 * u * u * yukawa).epsilon(1e-13));

    // frozen closed-form point: u = 1, dx = x-hat
    const Eigen::Matrix3d k1 = dyadic_kernel(1.0, Eigen::Vector3d(1.0, 0.0, 0.0));
    const double pref = std::exp(-1.0) / (4.0 * M_PI);
    CHECK(k1(0, 0) == doctest::Approx(pref * 4.0).epsilon(1e-14));   // 7 - 3
    CHECK(k1(1, 1) == doctest::Approx(-pref * 3.0).epsilon(1e-14));  // -(1+1+1)
    CHECK(k1(2, 2) == doctest::Approx(-pref * 3.0).epsilon(1e-14));
    CHECK(std::abs(k1(0, 1)) < 1e-18);

    CHECK_THROWS_AS(dyadic_kernel(1.0, Eigen::Vector3d::Zero()), std::domain_error);
}

TEST_CASE("dyadic kernel solves the vector Helmholtz equation away from the source") {
    // ((laplacian - u^2) delta_ik - d_i d_k) D_kj(x) = 0 for x != 0
    const double u = 0.8, h = 5e-4;
    const Eigen::Vector3d x(0.9, 0.4, 0.3);

    Eigen::Matrix3d lap = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) lap += numeric_second_derivative(u, x, i, i, h);

    Eigen::Matrix3d residual = lap - u * u * dyadic_kernel(u, x);
    for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k)
            residual.row(i) -= numeric_second_derivative(u, x, i, k, h).row(k);
    const double scale = dyadic_kernel(u, x).norm();
    CHECK(residual.norm() / scale < 1e-4);  // finite-difference floor
}

TEST_CASE("coupling matrix structure") {
    // single site: pure (zeroed) self block
    const auto single = make_lattice({Eigen::Vector3d::Zero()}, 0.1, 0.0);
    CHECK(build_coupling(single, 1.0).m.norm() == 0.0);

    // two sites: symmetric with the kernel block
    const Eigen::Vector3d d(0.0, 0.0, 2.0);
    const auto pair = make_lattice({Eigen::Vector3d::Zero(), d}, 0.05, 0.0);
    const auto coupling = build_coupling(pair, 0.7);
    CHECK((coupling.m - coupling.m.transpose()).norm() == 0.0);
    CHECK((coupling.m.block<3, 3>(0, 3) - 0.05 * dyadic_kernel(0.7, -d)).norm() < 1e-18);
    CHECK(coupling.m.block<3, 3>(0, 0).norm() == 0.0);

    // nearest neighbours at exactly the cutoff distance stay coupled
    const auto cube = cubic_slab(2, 1, 1, 1.0, 0.1);
    CHECK(build_coupling(cube, 0.5).m.block<3, 3>(0, 3).norm() > 0.0);

    // lattices violating their own cutoff are rejected outright
    CHECK_THROWS_AS(
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0.3, 0.0, 0.0)}, 0.1, 0.5),
        std::invalid_argument);
}

TEST_CASE("spectral radius against a power-iteration oracle") {
    const auto lattice = cubic_slab(3, 3, 3, 1.0, 0.01);
    const auto coupling = build_coupling(lattice, 1.0);

    Eigen::VectorXd v = Eigen::VectorXd::Ones(coupling.m.rows());
    double lambda = 0.0;
    for (int it = 0; it < 3000; ++it) {
        v = coupling.m * v;
        lambda = v.norm();
        v /= lambda;
    }
    CHECK(spectral_radius(coupling) == doctest::Approx(lambda).epsilon(1e-8));
}

TEST_CASE("spectral free energy") {
    // a0 = 0: no interaction
    const auto inert = make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 2)},
                                    0.0, 0.0);
    CHECK(free_energy_spectral(inert, 1.0) == 0.0);

    // two-site closed block reduction: 1/2 sum ln(1 - k_i^2) over the three
    // eigenvalues of a0 D (transverse pair and longitudinal)
    const double a0 = 0.05, d = 2.0, u = 0.7;
    const auto pair =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, d)}, a0, 0.0);
    const double ud = u * d;
    const double pref = a0 * std::exp(-ud) / (4.0 * M_PI * d * d * d);
    const double k_t = -pref * (1.0 + ud + ud * ud);
    const double k_l = pref * 2.0 * (1.0 + ud);
    const double closed =
        0.5 * (2.0 * std::log1p(-k_t * k_t) + std::log1p(-k_l * k_l));
    CHECK(free_energy_spectral(pair, u) == doctest::Approx(closed).epsilon(1e-12));

    // divergent coupling reports the spectral radius and names the frequency
    const auto strong =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 1.0)}, 40.0, 0.0);
    try {
        free_energy_spectral(strong, 0.1);
        FAIL("expected NonConvergence");
    } catch (const num::NonConvergence& e) {
        const std::string what = e.what();
        CHECK(what.find("spectral radius") != std::string::npos);
        CHECK(what.find("u = ") != std::string::npos);
        CHECK(e.error_estimate > 1.0);
    }
}

TEST_CASE("series expansion of the free energy") {
    const double a0 = 0.05, d = 2.0, u = 0.7;
    const auto pair =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, d)}, a0, 0.0);

    // n = 2 truncation: -(1/4) Tr(M^2) = -(a0^2/2) Tr D(d)^2 by hand
    const double ud = u * d;
    const double pref = std::exp(-ud) / (4.0 * M_PI * d * d * d);
    const double d_t = -pref * (1.0 + ud + ud * ud);
    const double d_l = pref * 2.0 * (1.0 + ud);
    const double hand = -0.5 * a0 * a0 * (2.0 * d_t * d_t + d_l * d_l);
    CHECK(free_energy_series(pair, u, 2) == doctest::Approx(hand).epsilon(1e-13));

    // geometric tail bound and convergence to the log-det
    const auto lattice = cubic_slab(3, 3, 3, 1.0, 0.55);
    const auto coupling = build_coupling(lattice, 0.5);
    const double rho = spectral_radius(coupling);
    CHECK(rho < 0.5);
    const double spectral = free_energy_spectral(lattice, 0.5);
    const double dim = static_cast<double>(coupling.m.rows());
    for (int n_max : {5, 10, 20, 40}) {
        const double bound =
            dim * std::pow(rho, n_max + 1) / ((n_max + 1) * (1.0 - rho));
        CHECK(std::abs(free_energy_series(lattice, 0.5, n_max) - spectral) <=
              bound + 1e-14);
    }
    CHECK(std::abs(free_energy_series(lattice, 0.5, 40) - spectral) < 1e-10);
}

TEST_CASE("free energy is negative on convergent configurations") {
    const auto lattice = cubic_slab(2, 2, 2, 1.0, 0.05);
    for (double u : {0.0, 0.3, 1.0, 3.0}) CHECK(free_energy_spectral(lattice, u) < 0.0);
}

TEST_CASE("splitting into body and interaction parts") {
    // a0 = 0 everywhere: all three parts vanish
    const auto empty_a = make_lattice({Eigen::Vector3d::Zero()}, 0.0, 0.0);
    const auto empty_b = make_lattice({Eigen::Vector3d(0, 0, 3)}, 0.0, 0.0);
    const auto zero = split_free_energy(empty_a, empty_b, 1.0);
    CHECK(zero.f_a == 0.0);
    CHECK(zero.f_b == 0.0);
    CHECK(zero.f_ab == 0.0);

    // identity F = F_A + F_B + F_AB against the union log-det
    for (std::uint64_t seed : {5u, 6u}) {
        const auto body_a = random_cloud(8, {0, 0, 0}, {1, 1, 1}, 0.33, 0.02, seed, "a");
        const auto body_b =
            random_cloud(8, {2.2, 0, 0}, {3.2, 1, 1}, 0.33, 0.02, seed + 100, "b");
        const auto split = split_free_energy(body_a, body_b, 0.7);
        DipoleLattice all = body_a;
        all.sites.insert(all.sites.end(), body_b.sites.begin(), body_b.sites.end());
        all.site_alpha0.insert(all.site_alpha0.end(), body_b.site_alpha0.begin(),
                               body_b.site_alpha0.end());
        all.exclusion = std::min(body_a.exclusion, body_b.exclusion);
        const double total = free_energy_spectral(all, 0.7);
        CHECK(std::abs(total - (split.f_a + split.f_b + split.f_ab)) <
              1e-12 * std::abs(total));
    }

    // two plaquettes: the interaction term is attractive and dominated by
    // its leading -1/2 Tr(M_AB M_BA) order in the dilute regime
    const auto plaq_a = cubic_slab(3, 3, 1, 1.0, 0.01, {0, 0, 0}, "a");
    const auto plaq_b = cubic_slab(3, 3, 1, 1.0, 0.01, {0, 0, 5.0}, "b");
    const auto split = split_free_energy(plaq_a, plaq_b, 0.4);
    CHECK(split.f_ab < 0.0);
    DipoleLattice all = plaq_a;
    all.sites.insert(all.sites.end(), plaq_b.sites.begin(), plaq_b.sites.end());
    all.site_alpha0.insert(all.site_alpha0.end(), plaq_b.site_alpha0.begin(),
                           plaq_b.site_alpha0.end());
    const auto full = build_coupling(all, 0.4);
    const auto m_ab = full.m.topRightCorner(27, 27);
    const double leading = -0.5 * (m_ab * m_ab.transpose()).trace();
    CHECK(split.f_ab == doctest::Approx(leading).epsilon(0.05));

    CHECK_THROWS_AS(split_free_energy(plaq_a, plaq_a, 0.4), std::invalid_argument);
}

TEST_CASE("rigid motions leave the free energies unchanged") {
    const auto body_a = random_cloud(6, {0, 0, 0}, {1, 1, 1}, 0.35, 0.03, 17, "a");
    const auto body_b = random_cloud(6, {2.5, 0, 0}, {3.5, 1, 1}, 0.35, 0.03, 18, "b");
    const auto base = split_free_energy(body_a, body_b, 0.9);

    const Eigen::Vector3d shift(0.4, -1.7, 2.2);
    const auto moved = split_free_energy(translated(body_a, shift),
                                         translated(body_b, shift), 0.9);
    CHECK(moved.f_ab == doctest::Approx(base.f_ab).epsilon(1e-12));

    const Eigen::Matrix3d rot =
        Eigen::AngleAxisd(0.83, Eigen::Vector3d(1, 2, -1).normalized()).toRotationMatrix();
    const auto spun = split_free_energy(rotated(body_a, rot), rotated(body_b, rot), 0.9);
    CHECK(spun.f_a == doctest::Approx(base.f_a).epsilon(1e-12));
    CHECK(spun.f_b == doctest::Approx(base.f_b).epsilon(1e-12));
    CHECK(spun.f_ab == doctest::Approx(base.f_ab).epsilon(1e-12));
}

TEST_CASE("thermal reduction limits") {
    const auto pair =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 3.0)}, 0.5, 0.0);
    ThermalSpec spec;
    spec.quad.rel_tol = 1e-9;
    spec.frequency_scale = 1.0 / 3.0;

    CHECK(total_free_energy(make_lattice({Eigen::Vector3d::Zero(),
                                          Eigen::Vector3d(0, 0, 3.0)},
                                         0.0, 0.0),
                            0.0, spec) == doctest::Approx(0.0));

    // Matsubara sum tends to the frequency integral as T -> 0
    const double cold = total_free_energy(pair, 0.01 / 3.0, spec);
    const double zero = total_free_energy(pair, 0.0, spec);
    CHECK(std::abs(cold - zero) / std::abs(zero) < 0.01);
}

TEST_CASE("force between bodies") {
    const auto plaq_a = cubic_slab(2, 2, 1, 1.0, 0.05, {0, 0, 0}, "a");
    const auto plaq_b = cubic_slab(2, 2, 1, 1.0, 0.05, {0, 0, 3.0}, "b");
    ThermalSpec spec;
    spec.quad.rel_tol = 1e-8;
    spec.frequency_scale = 1.0 / 3.0;

    const double f_ab = force_between(plaq_a, plaq_b, 2, 0.02, 0.0, spec);
    const double f_ba = force_between(plaq_b, plaq_a, 2, 0.02, 0.0, spec);
    CHECK(f_ab < 0.0);  // attraction pulls B toward A
    CHECK(f_ab == doctest::Approx(-f_ba).epsilon(1e-10));

    // zero polarizability -> zero force
    const auto inert_a = cubic_slab(2, 2, 1, 1.0, 0.0, {0, 0, 0}, "a");
    const auto inert_b = cubic_slab(2, 2, 1, 1.0, 0.0, {0, 0, 3.0}, "b");
    CHECK(force_between(inert_a, inert_b, 2, 0.02, 0.0, spec) == 0.0);
}

TEST_CASE("retarded pair interaction: exponent, dilution scaling, classical limit") {
    ThermalSpec spec;
    spec.quad.rel_tol = 2e-5;

    // retarded exponent over a short ladder (the acceptance suite runs the
    // full decade)
    const double slope =
        casimir_polder_exponent(5.0, {5.0, 8.0, 12.0, 20.0}, 0.0, spec);
    CHECK(std::abs(slope + 7.0) < 0.05);

    // analytic retarded coefficient at one separation
    ThermalSpec tight;
    tight.quad.rel_tol = 1e-8;
    tight.frequency_scale = 0.2;
    const auto pair =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 5.0)}, 5.0, 0.0);
    const double energy = total_free_energy(pair, 0.0, tight);
    const double analytic = -23.0 * 25.0 / (64.0 * std::pow(M_PI, 3) * std::pow(5.0, 7));
    CHECK(energy == doctest::Approx(analytic).epsilon(1e-4));

    // dilute quadratic scaling in a0
    const auto pair_half =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, 5.0)}, 2.5, 0.0);
    const double ratio = energy / total_free_energy(pair_half, 0.0, tight);
    CHECK(std::abs(ratio - 4.0) < 0.01);

    // classical high-temperature limit: slope -6 and the analytic m = 0 term
    ThermalSpec hot;
    hot.sum.rel_tol = 1e-10;
    const double slope_hot =
        casimir_polder_exponent(5.0, {5.0, 8.0, 12.0, 20.0}, 1.0, hot);
    CHECK(std::abs(slope_hot + 6.0) < 0.05);

    const double t_high = 1.0, d6 = 6.0;
    const auto pair6 =
        make_lattice({Eigen::Vector3d::Zero(), Eigen::Vector3d(0, 0, d6)}, 5.0, 0.0);
    const double classical =
        -3.0 * t_high * 25.0 / (16.0 * M_PI * M_PI * std::pow(d6, 6));
    CHECK(total_free_energy(pair6, t_high, hot) ==
          doctest::Approx(classical).epsilon(1e-3));
}

TEST_CASE("depolarization integral") {
    // off-diagonals vanish exactly by the angular reduction
    const Eigen::Matrix3d m = depolarization_integral(1.0, 1.0);
    CHECK(m(0, 1) == 0.0);
    CHECK(m(1, 2) == 0.0);

    // closed radial form: -(1/3)[2 - e^{-ua}(1 + ua)] on the diagonal
    const double ua = 1.0;
    const double expected = -(2.0 - std::exp(-ua) * (1.0 + ua)) / 3.0;
    CHECK(m(0, 0) == doctest::Approx(expected).epsilon(1e-10));

    // contact-term limit
    const Eigen::Matrix3d small = depolarization_integral(1.0, 1e-3);
    CHECK(std::abs(small(0, 0) + 1.0 / 3.0) < 1e-6);
    CHECK(std::abs(small(2, 2) + 1.0 / 3.0) < 1e-6);

    // u = 0: only the contact part survives
    const Eigen::Matrix3d stat = depolarization_integral(0.0, 2.0);
    CHECK(stat(1, 1) == doctest::Approx(-1.0 / 3.0));
}

TEST_CASE("lattice generators") {
    const auto slab = cubic_slab(6, 6, 2, 0.5, 0.01, {1, 2, 3}, "slab");
    CHECK(slab.sites.size() == 72);
    CHECK(slab.exclusion == 0.5);
    CHECK(slab.sites.front() == Eigen::Vector3d(1, 2, 3));

    const auto cloud = random_cloud(20, {0, 0, 0}, {2, 2, 2}, 0.4, 0.01, 9, "cloud");
    CHECK(cloud.sites.size() == 20);
    double min_dist = 1e9;
    for (std::size_t i = 0; i < cloud.sites.size(); ++i)
        for (std::size_t j = i + 1; j < cloud.sites.size(); ++j)
            min_dist = std::min(min_dist, (cloud.sites[i] - cloud.sites[j]).norm());
    CHECK(min_dist >= 0.4);

    // determinism: same seed, same cloud
    const auto cloud2 = random_cloud(20, {0, 0, 0}, {2, 2, 2}, 0.4, 0.01, 9, "cloud");
    CHECK(cloud.sites[7] == cloud2.sites[7]);
}
