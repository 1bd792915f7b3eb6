#include <cmath>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "biasflip/errors.hpp"
#include "biasflip/experiments.hpp"
#include "biasflip/io.hpp"

namespace bf = biasflip;
using bf::io::ConfigMap;
using bf::io::format_double;
using nlohmann::json;

namespace {

constexpr const char* kIonPreset = R"([scenario]
preset = ion-be9
well = left

[numerics]
grid_points = 512
grid_span_a0 = 48
)";

constexpr const char* kAtomPreset = R"([scenario]
preset = atom-rb87
well = left

[numerics]
grid_points = 1024
grid_span_dl = 4
)";

struct CommonArgs {
    std::string preset;
    std::string config_path;
    std::string protocol;
    double tf = -1.0;  // s
    std::string well;
    std::string out_dir;
    bool exact_eigenstates = false;
    bool snapshots = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
    cmd->add_option("--preset", a.preset, "Built-in scenario: ion-be9 or atom-rb87");
    cmd->add_option("--config", a.config_path, "Config file (sectioned text or JSON)");
    cmd->add_option("--protocol", a.protocol,
                    "sudden, polynomial, faquad or compensated");
    cmd->add_option("--tf", a.tf, "Protocol duration, s");
    cmd->add_option("--well", a.well, "left or right")
        ->check(CLI::IsMember({"left", "right"}));
    cmd->add_option("--out", a.out_dir, "Output directory");
    cmd->add_flag("--exact-eigenstates,!--no-exact-eigenstates", a.exact_eigenstates,
                  "Diagonalize the full potential for the well states (default on)");
    cmd->add_flag("--snapshots", a.snapshots, "Record density snapshots");
}

ConfigMap merge_config(const CommonArgs& a) {
    ConfigMap cfg;
    if (!a.preset.empty()) {
        if (a.preset == "ion-be9")
            cfg = bf::io::parse_config(kIonPreset);
        else if (a.preset == "atom-rb87")
            cfg = bf::io::parse_config(kAtomPreset);
        else
            throw bf::ConfigParse("unknown preset: " + a.preset);
    }
    if (!a.config_path.empty()) {
        ConfigMap file = bf::io::load_config(a.config_path);
        for (const auto& [sec, entries] : file.sections)
            for (const auto& [k, v] : entries) cfg.sections[sec][k] = v;
    }
    if (!a.protocol.empty()) cfg.sections["protocol"]["kind"] = a.protocol;
    if (a.tf >= 0.0) cfg.sections["protocol"]["tf_s"] = format_double(a.tf);
    if (!a.well.empty()) cfg.sections["scenario"]["well"] = a.well;
    if (a.exact_eigenstates) cfg.sections["numerics"]["exact_eigenstates"] = "true";
    if (a.snapshots) cfg.sections["output"]["snapshots"] = "true";
    if (cfg.sections.empty()) throw bf::ConfigParse("no scenario given; use --preset or --config");
    return cfg;
}

bf::WellSide side_from(const ConfigMap& cfg) {
    const std::string w = cfg.get_or("scenario", "well", "left");
    if (w == "left") return bf::WellSide::Left;
    if (w == "right") return bf::WellSide::Right;
    throw bf::ConfigParse("well must be left or right, got '" + w + "'");
}

bf::Scenario scenario_from(const ConfigMap& cfg) {
    const bf::WellSide side = side_from(cfg);
    const std::string preset = cfg.get_or("scenario", "preset", "");
    if (preset == "ion-be9") {
        return bf::make_ion_scenario(side,
                                     (int)cfg.get_double_or("numerics", "grid_points", 512),
                                     cfg.get_double_or("numerics", "grid_span_a0", 48.0));
    }
    if (preset == "atom-rb87") {
        return bf::make_atom_scenario(side,
                                      (int)cfg.get_double_or("numerics", "grid_points", 1024),
                                      cfg.get_double_or("numerics", "grid_span_dl", 4.0));
    }
    if (!preset.empty()) throw bf::ConfigParse("unknown preset: " + preset);

    const std::string kind = cfg.get("scenario", "kind");
    bf::DoubleWellParams params;
    if (kind == "ion") {
        params = bf::IonQuarticParams{cfg.get_double("scenario", "alpha_N_per_m"),
                                      cfg.get_double("scenario", "beta_N_per_m3"),
                                      cfg.get_double("scenario", "gamma0_N"),
                                      cfg.get_double("scenario", "mass_kg")};
    } else if (kind == "atom") {
        params = bf::AtomLatticeParams{cfg.get_double("scenario", "omega_rad_per_s"),
                                       cfg.get_double("scenario", "v0_J"),
                                       cfg.get_double("scenario", "d_lattice_m"),
                                       cfg.get_double("scenario", "delta_x0_m"),
                                       cfg.get_double("scenario", "mass_kg")};
    } else {
        throw bf::ConfigParse("scenario.kind must be ion or atom, got '" + kind + "'");
    }
    bf::Scenario s = bf::make_custom_scenario(
        params, side, (int)cfg.get_double_or("numerics", "grid_points", 512),
        cfg.get_double_or("numerics", "grid_span_a0", 48.0));
    return s;
}

bf::ProtocolKind kind_from(const std::string& name) {
    if (name == "sudden") return bf::ProtocolKind::Sudden;
    if (name == "polynomial") return bf::ProtocolKind::Polynomial;
    if (name == "faquad") return bf::ProtocolKind::Faquad;
    if (name == "compensated") return bf::ProtocolKind::PolynomialCompensated;
    throw bf::ConfigParse("unknown protocol: " + name);
}

bf::ProtocolSpec spec_from(const ConfigMap& cfg, const bf::Scenario& s) {
    const bf::ProtocolKind kind = kind_from(cfg.get("protocol", "kind"));
    const double l0 = cfg.get_double_or("protocol", "lambda_start", s.lambda0);
    const double l1 = cfg.get_double_or("protocol", "lambda_end", -s.lambda0);
    if (kind == bf::ProtocolKind::Sudden) return bf::build_sudden(l0, l1);
    if (!cfg.has("protocol", "tf_s"))
        throw bf::ConfigParse("protocol.tf_s (or --tf) required for timed protocols");
    const double tf = cfg.get_double("protocol", "tf_s");
    switch (kind) {
        case bf::ProtocolKind::Polynomial: return bf::build_polynomial(l0, l1, tf);
        case bf::ProtocolKind::Faquad: return bf::build_faquad(l0, l1, tf);
        default: return bf::build_polynomial_compensated(l0, l1, tf);
    }
}

bf::RunOptions options_from(const ConfigMap& cfg) {
    bf::RunOptions opt;
    opt.dt = cfg.get_double_or("numerics", "dt_s", 0.0);
    opt.min_steps = (int)cfg.get_double_or("numerics", "min_steps", 1000);
    opt.exact_eigenstates = cfg.get_or("numerics", "exact_eigenstates", "true") == "true";
    opt.record_snapshots = cfg.get_or("output", "snapshots", "false") == "true";
    opt.store_every = (int)cfg.get_double_or("numerics", "snapshot_stride", 50);
    return opt;
}

void emit(const ConfigMap& cfg, const std::string& name, const std::string& content,
          bool also_stdout) {
    if (cfg.has("output", "dir") || also_stdout) {
        if (also_stdout) std::cout << content;
    }
    if (cfg.has("output", "dir")) {
        const std::filesystem::path dir = cfg.get("output", "dir");
        std::filesystem::create_directories(dir);
        bf::io::write_file((dir / name).string(), content);
    }
}

json analysis_json(const bf::Scenario& s) {
    const bf::WellAnalysis& a = s.analysis;
    json j;
    j["x_minus_m"] = a.x_minus;
    j["x_plus_m"] = a.x_plus;
    j["barrier_x_m"] = a.barrier_x;
    j["distance_m"] = a.distance;
    j["bias_J"] = a.bias;
    j["omega_minus_rad_per_s"] = a.omega_minus;
    j["omega_plus_rad_per_s"] = a.omega_plus;
    j["omega0_rad_per_s"] = a.omega_ref;
    j["displacement_m"] = a.displacement;
    j["ratio_R"] = a.ratio;
    return j;
}

json validity_json(const bf::ValidityReport& r) {
    json j;
    j["two_minima_bound"] = r.two_minima_bound;
    j["parallel_bound"] = r.parallel_bound;
    j["two_minima_margin"] = r.two_minima_margin;
    j["parallel_margin"] = r.parallel_margin;
    j["freq_variation_rad_per_s"] = r.freq_variation;
    j["distance_variation_m"] = r.distance_variation;
    j["parallel_ok"] = r.parallel_ok;
    j["status"] = r.status == bf::ValidityStatus::Ok
                      ? "ok"
                      : (r.status == bf::ValidityStatus::Warn ? "warn" : "fail");
    return j;
}

json metrics_json(const bf::Scenario& s, const bf::RunMetrics& m) {
    json j;
    j["scenario"] = s.name;
    j["well"] = s.well_choice == bf::WellSide::Left ? "left" : "right";
    j["protocol"] = bf::protocol_name(m.protocol_kind);
    j["t_final_s"] = m.t_final;
    j["fidelity"] = m.fidelity;
    j["excitation_energy_J"] = m.excitation_energy;
    j["excitation_energy_hbar_omega"] = m.excitation_energy / s.scale.energy_J;
    j["sudden_fidelity_reference"] = m.sudden_fidelity_reference;
    j["ratio_R"] = m.ratio_R;
    j["norm_drift"] = m.norm_drift;
    return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

int cmd_analyze(const ConfigMap& cfg) {
    const bf::Scenario s = scenario_from(cfg);
    const bf::ValidityReport rep = bf::validity_report(s.params, std::abs(s.lambda0));
    const bf::WellAnalysis& a = s.analysis;
    std::ostringstream text;
    text << "scenario " << s.name << "\n"
         << "  minima        " << format_double(a.x_minus) << " m, " << format_double(a.x_plus)
         << " m\n"
         << "  distance D    " << format_double(a.distance) << " m\n"
         << "  bias delta    " << format_double(a.bias) << " J\n"
         << "  Omega0        " << format_double(a.omega_ref) << " rad/s ("
         << format_double(a.omega_ref / (2.0 * M_PI)) << " Hz)\n"
         << "  displacement  " << format_double(a.displacement) << " m\n"
         << "  ratio R       " << format_double(a.ratio) << "\n"
         << "  margins       two-minima " << format_double(rep.two_minima_margin) << ", parallel "
         << format_double(rep.parallel_margin) << "\n";
    std::cout << text.str();

    json j;
    j["analysis"] = analysis_json(s);
    j["validity"] = validity_json(rep);
    j["scenario"] = s.name;
    emit(cfg, "analyze.json", dump(j), false);
    if (!cfg.has("output", "dir")) std::cout << dump(j);
    return 0;
}

int cmd_design(const ConfigMap& cfg) {
    const bf::Scenario s = scenario_from(cfg);
    const bf::ProtocolSpec spec = spec_from(cfg, s);
    if (spec.kind == bf::ProtocolKind::Sudden)
        throw bf::ConfigParse("design needs a timed protocol; sudden has no trajectory");
    const int n = (int)cfg.get_double_or("numerics", "trajectory_samples", 1001);
    bf::ProtocolTrajectory traj = bf::minima_trajectory(spec, s.params, s.well_choice, n);
    if (spec.kind == bf::ProtocolKind::PolynomialCompensated)
        traj = bf::compensate(traj, s.params);

    const std::string lam_unit = s.is_ion() ? "N" : "m";
    std::ostringstream os;
    bf::io::CsvWriter csv(os);
    csv.row({"t_s", "lambda_" + lam_unit, "lambda_dot_" + lam_unit + "_per_s",
             "lambda_ddot_" + lam_unit + "_per_s2", "x0_m", "x0_ddot_m_per_s2",
             "lambda_eff_" + lam_unit, "extra_slope_J_per_m"});
    for (int i = 0; i < traj.times.size(); ++i)
        csv.numeric_row({traj.times[i], traj.lambda[i], traj.lambda_dot[i], traj.lambda_ddot[i],
                         traj.x0[i], traj.x0_ddot[i], traj.lambda_eff[i], traj.extra_slope[i]});
    emit(cfg, std::string("design_") + bf::protocol_name(spec.kind) + ".csv", os.str(),
         !cfg.has("output", "dir"));
    return 0;
}

int cmd_simulate(const ConfigMap& cfg) {
    const bf::Scenario s = scenario_from(cfg);
    const bf::ProtocolSpec spec = spec_from(cfg, s);
    const bf::RunOptions opt = options_from(cfg);
    bf::PropagationResult res{bf::Wavefunction(s.grid), {}, {}, {}, {}};
    const bf::RunMetrics m = bf::run_protocol_detailed(s, spec, opt, &res);

    const std::string metrics = dump(metrics_json(s, m));
    std::cout << metrics;
    emit(cfg, "metrics.json", metrics, false);

    if (opt.record_snapshots && spec.kind != bf::ProtocolKind::Sudden) {
        std::ostringstream os;
        bf::io::CsvWriter csv(os);
        std::vector<std::string> header{"t_s"};
        for (int i = 0; i < s.grid.size(); ++i)
            header.push_back(format_double(s.scale.length_to_si(s.grid.x()[i])));
        csv.row(header);
        for (int r = 0; r < res.density_snapshots.rows(); ++r) {
            std::vector<double> cells{s.scale.time_to_si(res.times[r])};
            for (int c = 0; c < res.density_snapshots.cols(); ++c)
                cells.push_back(res.density_snapshots(r, c) / s.scale.length_m);
            csv.numeric_row(cells);
        }
        emit(cfg, "density.csv", os.str(), false);
    }
    return 0;
}

int cmd_sweep(const ConfigMap& cfg) {
    const bf::Scenario s = scenario_from(cfg);
    const bf::RunOptions opt = options_from(cfg);

    std::vector<bf::ProtocolKind> kinds;
    {
        std::stringstream names(cfg.get_or("protocol", "kinds",
                                           cfg.get_or("protocol", "kind", "compensated")));
        std::string tok;
        while (std::getline(names, tok, ',')) kinds.push_back(kind_from(tok));
    }
    std::vector<double> tf_grid;
    if (cfg.has("protocol", "tf_list_s")) {
        std::stringstream vals(cfg.get("protocol", "tf_list_s"));
        std::string tok;
        while (std::getline(vals, tok, ',')) tf_grid.push_back(std::stod(tok));
    } else if (cfg.has("protocol", "tf_min_s")) {
        const double a = cfg.get_double("protocol", "tf_min_s");
        const double b = cfg.get_double("protocol", "tf_max_s");
        const int n = (int)cfg.get_double_or("protocol", "tf_points", 10);
        for (int i = 0; i < n; ++i)
            tf_grid.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
    } else if (cfg.has("protocol", "tf_s")) {
        tf_grid.push_back(cfg.get_double("protocol", "tf_s"));
    } else {
        throw bf::ConfigParse("sweep needs tf_list_s, tf_min_s/tf_max_s or tf_s");
    }

    const auto cells = bf::sweep_tf(s, kinds, tf_grid, opt);

    std::ostringstream os;
    bf::io::CsvWriter csv(os);
    csv.row({"protocol", "t_f_s", "fidelity", "excitation_energy_J",
             "excitation_energy_hbar_omega"});
    int ok_count = 0;
    json errors = json::array();
    for (const auto& c : cells) {
        if (c.ok) {
            ++ok_count;
            csv.row({bf::protocol_name(c.kind), format_double(c.t_final),
                     format_double(c.metrics.fidelity), format_double(c.metrics.excitation_energy),
                     format_double(c.metrics.excitation_energy / s.scale.energy_J)});
        } else {
            csv.row({bf::protocol_name(c.kind), format_double(c.t_final), "error", "error",
                     "error"});
            errors.push_back({{"protocol", bf::protocol_name(c.kind)},
                              {"t_f_s", c.t_final},
                              {"error", c.error}});
        }
    }
    emit(cfg, "sweep.csv", os.str(), !cfg.has("output", "dir"));

    json j;
    j["scenario"] = s.name;
    j["analysis"] = analysis_json(s);
    j["validity"] = validity_json(bf::validity_report(s.params, std::abs(s.lambda0)));
    j["cells_total"] = cells.size();
    j["cells_ok"] = ok_count;
    j["errors"] = errors;
    emit(cfg, "sweep_summary.json", dump(j), false);
    return ok_count > 0 ? 0 : 4;
}

int cmd_eig(const ConfigMap& cfg) {
    const bf::Scenario s = scenario_from(cfg);
    const double lambda = cfg.get_double_or("numerics", "lambda", s.lambda0);
    const int k = (int)cfg.get_double_or("numerics", "eig_count", s.is_ion() ? 4 : 6);
    const bf::EigenSolution sol = bf::scenario_spectrum(s, lambda, k);
    const double barrier =
        s.scale.length_to_internal(bf::barrier_position(bf::with_control(s.params, lambda)));

    std::ostringstream os;
    bf::io::CsvWriter csv(os);
    csv.row({"n", "energy_J", "side", "mass_fraction"});
    for (int n = 0; n < (int)sol.states.size(); ++n) {
        double left_mass = 0.0;
        const auto& psi = sol.states[n];
        for (int i = 0; i < s.grid.size(); ++i)
            if (s.grid.x()[i] < barrier) left_mass += std::norm(psi.amplitudes[i]);
        left_mass *= s.grid.dx();
        const std::string side =
            left_mass > 0.55 ? "left" : (left_mass < 0.45 ? "right" : "center");
        csv.row({std::to_string(n), format_double(s.scale.energy_to_si(sol.energies[n])), side,
                 format_double(left_mass)});
    }
    emit(cfg, "spectrum.csv", os.str(), !cfg.has("output", "dir"));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Double-well bias inversion toolkit"};
    app.require_subcommand(1);

    CommonArgs args;
    auto* analyze = app.add_subcommand("analyze", "Well analytics and validity report");
    auto* design = app.add_subcommand("design", "Emit protocol trajectory data");
    auto* simulate = app.add_subcommand("simulate", "Propagate one protocol and report metrics");
    auto* sweep = app.add_subcommand("sweep", "Fidelity/excitation table over t_f");
    auto* eig = app.add_subcommand("eig", "Stationary spectrum of a configuration");
    for (auto* cmd : {analyze, design, simulate, sweep, eig}) add_common(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        ConfigMap cfg = merge_config(args);
        if (cfg.has("output", "dir") || !args.out_dir.empty()) {
            if (!args.out_dir.empty()) cfg.sections["output"]["dir"] = args.out_dir;
            const std::filesystem::path dir = cfg.get("output", "dir");
            std::filesystem::create_directories(dir);
            bf::io::write_file((dir / "config_canonical.txt").string(),
                               bf::io::canonical_config(cfg));
        }
        if (app.got_subcommand(analyze)) return cmd_analyze(cfg);
        if (app.got_subcommand(design)) return cmd_design(cfg);
        if (app.got_subcommand(simulate)) return cmd_simulate(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        if (app.got_subcommand(eig)) return cmd_eig(cfg);
    } catch (const bf::ConfigParse& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 3;
    } catch (const bf::NotDoubleWell& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bf::ValidityViolation& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const bf::NonPositiveDuration& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const bf::Error& e) {
        std::cerr << "propagation error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
