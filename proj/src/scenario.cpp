#include "casimir/scenario.hpp"

#include <fstream>
#include <iostream>

#include <json.hpp>

#include "casimir/dipole.hpp"
#include "casimir/parallel.hpp"
#include "casimir/planar.hpp"
#include "casimir/spherical.hpp"
#include "casimir/table.hpp"
#include "casimir/validation.hpp"

namespace casimir::cli {

namespace {

using nlohmann::ordered_json;

struct NumericSettings {
    double quad_tol = 1e-9;
    double sum_tol = 1e-10;
    int l_max = 60;
    int n_max = 40;
};

NumericSettings numeric_settings(const Config& config) {
    NumericSettings s;
    s.quad_tol = config.get_double_or("numerics", "quad_tol", 1e-9);
    s.sum_tol = config.get_double_or("numerics", "sum_tol", 1e-10);
    s.l_max = static_cast<int>(config.get_int_or("numerics", "l_max", 60));
    s.n_max = static_cast<int>(config.get_int_or("numerics", "n_max", 40));
    if (!(s.quad_tol > 0.0)) config.fail("numerics", "quad_tol", "must be > 0");
    if (!(s.sum_tol > 0.0)) config.fail("numerics", "sum_tol", "must be > 0");
    if (s.l_max < 1) config.fail("numerics", "l_max", "must be >= 1");
    return s;
}

planar::ZeroModeTePolicy parse_policy(const Config& config) {
    const std::string name =
        config.get_string_or("geometry", "policy", "microscopic_zero");
    if (name == "microscopic_zero") return planar::ZeroModeTePolicy::microscopic_zero;
    if (name == "lifshitz_limit") return planar::ZeroModeTePolicy::lifshitz_limit;
    if (name == "perfect_conductor") return planar::ZeroModeTePolicy::perfect_conductor;
    config.fail("geometry", "policy", "unknown policy '" + name + "'");
}

std::string policy_name(planar::ZeroModeTePolicy policy) {
    switch (policy) {
        case planar::ZeroModeTePolicy::microscopic_zero: return "microscopic_zero";
        case planar::ZeroModeTePolicy::lifshitz_limit: return "lifshitz_limit";
        case planar::ZeroModeTePolicy::perfect_conductor: return "perfect_conductor";
    }
    return "?";
}

planar::PlanarCavity parse_cavity(const Config& config, const NumericSettings& numerics) {
    planar::PlanarCavity cavity;
    cavity.gap = config.get_double("geometry", "gap");
    if (!(cavity.gap > 0.0)) config.fail("geometry", "gap", "must be > 0");
    cavity.temperature = config.get_double_or("geometry", "temperature", 0.0);
    if (cavity.temperature < 0.0) config.fail("geometry", "temperature", "must be >= 0");
    cavity.m0_te_policy = parse_policy(config);
    cavity.quad.rel_tol = numerics.quad_tol;
    cavity.sum.rel_tol = numerics.sum_tol;
    if (cavity.m0_te_policy != planar::ZeroModeTePolicy::perfect_conductor ||
        config.has_section("material.left")) {
        cavity.left = parse_material(config, "material.left");
        cavity.right = config.has_section("material.right")
                           ? parse_material(config, "material.right")
                           : cavity.left;
    }
    return cavity;
}

dipole::DipoleLattice parse_lattice(const Config& config, const std::string& section) {
    const std::string generator = config.get_string(section, "generator");
    const double alpha0 = config.get_double(section, "alpha0");
    if (generator == "cubic") {
        const Eigen::Vector3d origin(config.get_double_or(section, "origin_x", 0.0),
                                     config.get_double_or(section, "origin_y", 0.0),
                                     config.get_double_or(section, "origin_z", 0.0));
        return dipole::cubic_slab(static_cast<int>(config.get_int(section, "nx")),
                                  static_cast<int>(config.get_int(section, "ny")),
                                  static_cast<int>(config.get_int(section, "nz")),
                                  config.get_double(section, "spacing"), alpha0, origin,
                                  section);
    }
    if (generator == "cloud") {
        const Eigen::Vector3d lo(config.get_double(section, "box_lo_x"),
                                 config.get_double(section, "box_lo_y"),
                                 config.get_double(section, "box_lo_z"));
        const Eigen::Vector3d hi(config.get_double(section, "box_hi_x"),
                                 config.get_double(section, "box_hi_y"),
                                 config.get_double(section, "box_hi_z"));
        return dipole::random_cloud(static_cast<int>(config.get_int(section, "n")), lo, hi,
                                    config.get_double(section, "min_distance"), alpha0,
                                    static_cast<std::uint64_t>(
                                        config.get_int_or(section, "seed", 1)),
                                    section);
    }
    config.fail(section, "generator", "unknown generator '" + generator + "'");
}

struct OutputSink {
    std::filesystem::path directory;
    TableFormat format = TableFormat::csv;
    std::string base;
    std::vector<std::string> outputs;

    std::filesystem::path table_path(const std::string& suffix = "") const {
        const std::string ext = (format == TableFormat::csv) ? ".csv" : ".json";
        return directory / (base + suffix + ext);
    }

    void write(const Table& table, const std::string& suffix = "") {
        const auto path = table_path(suffix);
        write_table_file(table, format, path);
        outputs.push_back(path.string());
    }
};

OutputSink make_sink(const Config& config, const std::filesystem::path& out_dir,
                     const std::string& default_base) {
    OutputSink sink;
    sink.directory = out_dir;
    std::filesystem::create_directories(out_dir);
    const std::string fmt = config.get_string_or("scenario", "format", "csv");
    if (fmt == "csv")
        sink.format = TableFormat::csv;
    else if (fmt == "json")
        sink.format = TableFormat::json;
    else
        config.fail("scenario", "format", "expected csv or json");
    sink.base = config.get_string_or("scenario", "output", default_base);
    return sink;
}

void write_manifest(const OutputSink& sink, const Config& config, const std::string& scenario,
                    const NumericSettings& numerics, const ordered_json& achieved,
                    const std::vector<std::string>& formulas) {
    ordered_json manifest;
    manifest["scenario"] = scenario;
    manifest["config"] = config.name();
    manifest["config_hash"] = fnv1a_hex(config.raw_text());
    manifest["tolerances"] = {{"quad_tol", numerics.quad_tol},
                              {"sum_tol", numerics.sum_tol},
                              {"l_max", numerics.l_max},
                              {"n_max", numerics.n_max}};
    manifest["achieved"] = achieved;
    manifest["formulas"] = formulas;
    manifest["outputs"] = sink.outputs;

    const auto path = sink.directory / (sink.base + ".manifest.json");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open manifest: " + path.string());
    out << manifest.dump(2) << "\n";
}

// ----------------------------------------------------------------- scenarios

RunResult run_pressure(const Config& config, const std::filesystem::path& out_dir) {
    const NumericSettings numerics = numeric_settings(config);
    const planar::PlanarCavity cavity = parse_cavity(config, numerics);

    const num::Estimate pressure = (cavity.temperature > 0.0)
                                       ? planar::pressure_finite_temperature_est(cavity)
                                       : planar::pressure_zero_temperature_est(cavity);
    const num::Estimate free_energy = planar::free_energy_per_area_est(cavity);

    OutputSink sink = make_sink(config, out_dir, "pressure");
    Table table;
    table.columns = {"gap",      "temperature", "policy",           "pressure",
                     "pressure_error", "free_energy_per_area", "free_energy_error"};
    table.add_row({cavity.gap, cavity.temperature, policy_name(cavity.m0_te_policy),
                   pressure.value, pressure.error, free_energy.value, free_energy.error});
    sink.write(table);

    write_manifest(sink, config, "pressure", numerics,
                   {{"pressure_error_estimate", pressure.error},
                    {"free_energy_error_estimate", free_energy.error}},
                   {"plasma_permittivity", "lorentz_lorenz", "fresnel_reflection_rotated",
                    "mode_loop_factor", "lifshitz_pressure", "free_energy_per_area",
                    cavity.temperature > 0.0 ? "matsubara_sum" : "frequency_integral"});
    return {0, sink.outputs};
}

RunResult run_temperature_sweep(const Config& config, const std::filesystem::path& out_dir) {
    const NumericSettings numerics = numeric_settings(config);
    planar::PlanarCavity base = parse_cavity(config, numerics);
    const std::vector<double> temperatures = config.get_list("sweep", "t_values");
    for (double t : temperatures)
        if (t < 0.0) config.fail("sweep", "t_values", "temperatures must be >= 0");

    struct Row {
        num::Estimate pressure, free_energy;
    };
    std::vector<Row> rows(temperatures.size());
    double worst_error = 0.0;
    parallel_for(temperatures.size(), [&](std::size_t i) {
        planar::PlanarCavity cavity = base;
        cavity.temperature = temperatures[i];
        rows[i].pressure = (cavity.temperature > 0.0)
                               ? planar::pressure_finite_temperature_est(cavity)
                               : planar::pressure_zero_temperature_est(cavity);
        rows[i].free_energy = planar::free_energy_per_area_est(cavity);
    });

    OutputSink sink = make_sink(config, out_dir, "temperature_sweep");
    Table table;
    table.columns = {"temperature", "pressure", "pressure_error", "free_energy_per_area",
                     "free_energy_error"};
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        table.add_row({temperatures[i], rows[i].pressure.value, rows[i].pressure.error,
                       rows[i].free_energy.value, rows[i].free_energy.error});
        worst_error = std::max(worst_error, rows[i].pressure.error);
    }
    sink.write(table);

    write_manifest(sink, config, "temperature_sweep", numerics,
                   {{"max_pressure_error_estimate", worst_error}},
                   {"fresnel_reflection_rotated", "mode_loop_factor", "lifshitz_pressure",
                    "matsubara_sum"});
    return {0, sink.outputs};
}

RunResult run_reflection_table(const Config& config, const std::filesystem::path& out_dir) {
    const NumericSettings numerics = numeric_settings(config);
    const planar::PlanarCavity cavity = parse_cavity(config, numerics);
    const std::vector<double> p_values = config.get_list("grid", "p_values");
    for (double p : p_values)
        if (!(p > 0.0)) config.fail("grid", "p_values", "momenta must be > 0");

    std::vector<std::pair<long long, double>> frequencies;  // (m, u)
    if (cavity.temperature > 0.0) {
        const long long m_max = config.get_int_or("grid", "m_max", 8);
        if (m_max < 0) config.fail("grid", "m_max", "must be >= 0");
        for (long long m = 0; m <= m_max; ++m)
            frequencies.emplace_back(m, 2.0 * M_PI * m * cavity.temperature);
    } else {
        for (double u : config.get_list("grid", "u_values")) {
            if (!(u >= 0.0)) config.fail("grid", "u_values", "frequencies must be >= 0");
            frequencies.emplace_back(-1, u);
        }
    }

    OutputSink sink = make_sink(config, out_dir, "reflection_table");
    Table table;
    table.columns = {"m", "u", "p", "r_te", "r_tm", "integrand"};
    for (const auto& [m, u] : frequencies)
        for (double p : p_values) {
            const planar::FrequencyMomentumPoint pt{u, p};
            const auto refl = planar::effective_reflection(pt, cavity, true);
            table.add_row({m, u, p, refl.te, refl.tm, planar::pressure_integrand(pt, cavity)});
        }
    sink.write(table);

    write_manifest(sink, config, "reflection_table", numerics, ordered_json::object(),
                   {"fresnel_reflection_rotated", "zero_mode_te_policy",
                    "pressure_spectral_density"});
    return {0, sink.outputs};
}

RunResult run_sphere_modes(const Config& config, const std::filesystem::path& out_dir) {
    const NumericSettings numerics = numeric_settings(config);
    const double radius = config.get_double("geometry", "radius");
    if (!(radius > 0.0)) config.fail("geometry", "radius", "must be > 0");
    const PolarizabilityModel material = parse_material(config, "material.ball");
    const std::vector<double> u_values = config.get_list("grid", "u_values");
    for (double u : u_values)
        if (!(u > 0.0)) config.fail("grid", "u_values", "frequencies must be > 0");

    struct Row {
        double u, eps, gamma, mu;
        int l;
        spherical::Polarization lambda;
    };
    std::vector<Row> rows(u_values.size() * numerics.l_max * 2);
    parallel_for(rows.size(), [&](std::size_t idx) {
        const std::size_t per_u = 2 * numerics.l_max;
        const double u = u_values[idx / per_u];
        const std::size_t rem = idx % per_u;
        const int l = static_cast<int>(rem / 2) + 1;
        const auto lambda = (rem % 2 == 0) ? spherical::Polarization::te
                                           : spherical::Polarization::tm;
        const double eps = eval_epsilon(material, u).value();
        const auto channel = spherical::make_channel(radius, u, eps);
        const spherical::SphericalMode mode{lambda, l};
        rows[idx] = Row{u,
                        eps,
                        spherical::gamma_sphere(mode, channel),
                        spherical::mu_sphere(mode, channel),
                        l,
                        lambda};
    });

    OutputSink sink = make_sink(config, out_dir, "sphere_modes");
    Table table;
    table.columns = {"lambda", "l", "uR", "eps", "alpha2_gamma", "mu"};
    double tail_ratio = 0.0;
    for (const auto& row : rows) {
        table.add_row({std::string(row.lambda == spherical::Polarization::te ? "TE" : "TM"),
                       static_cast<long long>(row.l), row.u * radius, row.eps, row.gamma,
                       row.mu});
        if (row.l == numerics.l_max) {
            // crude tail diagnostic: compare against the previous multipole
            for (const auto& prev : rows)
                if (prev.l == numerics.l_max - 1 && prev.u == row.u &&
                    prev.lambda == row.lambda && std::abs(prev.gamma) > 0.0)
                    tail_ratio = std::max(tail_ratio, std::abs(row.gamma / prev.gamma));
        }
    }
    sink.write(table);

    write_manifest(sink, config, "sphere_modes", numerics,
                   {{"gamma_tail_ratio_at_l_max", tail_ratio}},
                   {"modified_spherical_bessel", "bilinear_boundary_forms",
                    "sphere_mode_loop_gamma", "sphere_scattering_mu"});
    return {0, sink.outputs};
}

RunResult run_oracle(const Config& config, const std::filesystem::path& out_dir) {
    const NumericSettings numerics = numeric_settings(config);
    const double temperature = config.get_double_or("oracle", "temperature", 0.0);
    dipole::ThermalSpec spec;
    spec.quad.rel_tol = numerics.quad_tol;
    spec.sum.rel_tol = numerics.sum_tol;
    spec.frequency_scale = config.get_double_or("oracle", "frequency_scale", 1.0);

    const dipole::DipoleLattice body_a = parse_lattice(config, "lattice.a");

    OutputSink sink = make_sink(config, out_dir, "oracle");
    Table table;
    table.columns = {"quantity", "value", "error_estimate"};
    ordered_json achieved = ordered_json::object();

    if (config.has_section("lattice.b")) {
        const dipole::DipoleLattice body_b = parse_lattice(config, "lattice.b");
        const std::string compute = config.get_string_or("oracle", "compute", "both");
        const auto e_ab =
            dipole::interaction_free_energy_est(body_a, body_b, temperature, spec);
        table.add_row({std::string("interaction_free_energy"), e_ab.value, e_ab.error});
        achieved["interaction_error_estimate"] = e_ab.error;
        if (compute == "force" || compute == "both") {
            const std::string axis_name = config.get_string_or("oracle", "axis", "z");
            int axis = 2;
            if (axis_name == "x") axis = 0;
            else if (axis_name == "y") axis = 1;
            else if (axis_name == "z") axis = 2;
            else config.fail("oracle", "axis", "expected x, y or z");
            const double h = config.get_double_or("oracle", "h", 0.01);
            const double force =
                dipole::force_between(body_a, body_b, axis, h, temperature, spec);
            table.add_row({"force_" + axis_name, force, 0.0});
        }
    } else {
        const auto f_total = dipole::total_free_energy_est(body_a, temperature, spec);
        table.add_row({std::string("total_free_energy"), f_total.value, f_total.error});
        achieved["free_energy_error_estimate"] = f_total.error;
    }

    if (config.get_bool_or("oracle", "series_check", false)) {
        // spectral density at the probe frequency, log-det vs power series
        const double u_probe = config.get_double_or("oracle", "series_u", 1.0);
        const double spectral = dipole::free_energy_spectral(body_a, u_probe);
        const double series = dipole::free_energy_series(body_a, u_probe, numerics.n_max);
        const double radius =
            dipole::spectral_radius(dipole::build_coupling(body_a, u_probe));
        table.add_row({std::string("spectral_density_logdet"), spectral, 0.0});
        table.add_row({std::string("spectral_density_series"), series,
                       std::abs(series - spectral)});
        achieved["series_spectral_radius"] = radius;
        achieved["series_truncation"] = std::abs(series - spectral);
    }
    sink.write(table);

    if (config.get_bool_or("oracle", "dump_sites", false)) {
        Table sites;
        sites.columns = {"body", "x", "y", "z"};
        for (const auto& s : body_a.sites)
            sites.add_row({std::string("a"), s.x(), s.y(), s.z()});
        if (config.has_section("lattice.b"))
            for (const auto& s : parse_lattice(config, "lattice.b").sites)
                sites.add_row({std::string("b"), s.x(), s.y(), s.z()});
        sink.write(sites, "_sites");
    }

    write_manifest(sink, config, "oracle_run", numerics, achieved,
                   {"retarded_dipole_kernel", "coupling_matrix_logdet", "block_splitting",
                    temperature > 0.0 ? "matsubara_sum" : "frequency_integral"});
    return {0, sink.outputs};
}

RunResult run_validate(const Config& config, const std::filesystem::path& out_dir,
                       bool full) {
    const NumericSettings numerics = numeric_settings(config);
    const auto results =
        full ? validation::run_acceptance() : validation::run_quick();
    const int failures = validation::report(results, std::cout);

    OutputSink sink = make_sink(config, out_dir, "validate");
    Table table;
    table.columns = {"check", "passed", "observed", "threshold", "detail"};
    std::vector<std::string> formulas;
    for (const auto& r : results) {
        table.add_row({r.name, static_cast<long long>(r.passed ? 1 : 0), r.observed,
                       r.threshold, r.detail});
        formulas.push_back(r.name);
    }
    sink.write(table);
    write_manifest(sink, config, "validate", numerics,
                   {{"failures", failures}}, formulas);
    return {failures == 0 ? 0 : 1, sink.outputs};
}

}  // namespace

RunResult run_scenario(ScenarioKind kind, const Config& config,
                       const std::filesystem::path& out_dir) {
    switch (kind) {
        case ScenarioKind::pressure: return run_pressure(config, out_dir);
        case ScenarioKind::temperature_sweep: return run_temperature_sweep(config, out_dir);
        case ScenarioKind::reflection_table: return run_reflection_table(config, out_dir);
        case ScenarioKind::sphere_modes: return run_sphere_modes(config, out_dir);
        case ScenarioKind::oracle_run: return run_oracle(config, out_dir);
        case ScenarioKind::validate:
            return run_validate(config, out_dir,
                                config.get_bool_or("scenario", "full", false));
    }
    throw std::logic_error("run_scenario: unknown kind");
}

int run_cli(int argc, const char* const* argv) {
    const std::string usage =
        "usage: casimir <pressure|sweep|reflect|sphere|oracle|validate> [config] "
        "[--out DIR] [--full]\n";
    if (argc < 2) {
        std::cerr << usage;
        return 2;
    }

    const std::string command = argv[1];
    std::string config_path;
    std::filesystem::path out_dir = ".";
    bool full = false;
    for (int i = 2; i < argc; ++i) {
        const std::string arg = argv[i];
        if (arg == "--out") {
            if (++i >= argc) {
                std::cerr << "casimir: --out needs a directory\n" << usage;
                return 2;
            }
            out_dir = argv[i];
        } else if (arg == "--full") {
            full = true;
        } else if (config_path.empty()) {
            config_path = arg;
        } else {
            std::cerr << "casimir: unexpected argument '" << arg << "'\n" << usage;
            return 2;
        }
    }

    ScenarioKind kind;
    if (command == "pressure") kind = ScenarioKind::pressure;
    else if (command == "sweep") kind = ScenarioKind::temperature_sweep;
    else if (command == "reflect") kind = ScenarioKind::reflection_table;
    else if (command == "sphere") kind = ScenarioKind::sphere_modes;
    else if (command == "oracle") kind = ScenarioKind::oracle_run;
    else if (command == "validate") kind = ScenarioKind::validate;
    else {
        std::cerr << "casimir: unknown command '" << command << "'\n" << usage;
        return 2;
    }

    try {
        Config config = config_path.empty()
                            ? Config::parse_string(full ? "[scenario]\nfull = true\n" : "",
                                                   "<builtin>")
                            : Config::parse_file(config_path);
        if (kind != ScenarioKind::validate && config_path.empty()) {
            std::cerr << "casimir: command '" << command << "' needs a config file\n" << usage;
            return 2;
        }
        return run_scenario(kind, config, out_dir).exit_code;
    } catch (const ConfigError& e) {
        std::cerr << "casimir: " << e.what() << "\n";
        return 2;
    } catch (const num::NonConvergence& e) {
        std::cerr << "casimir: numeric non-convergence: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "casimir: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace casimir::cli
