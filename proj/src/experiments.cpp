#include "biasflip/experiments.hpp"

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <thread>

#include "biasflip/errors.hpp"

namespace biasflip {

double Scenario::period() const { return 2.0 * M_PI / analysis.omega_ref; }

namespace {

constexpr double kMassBe9_u = 9.0121831;
constexpr double kMassRb87_u = 86.909180;
constexpr double kRbPolarizability = 1.3e-36;  // m^2 s, 1 um out-of-resonance beam

Scenario finalize_scenario(std::string name, const DoubleWellParams& params, WellSide side,
                           Grid grid, UnitScale scale, WellAnalysis analysis) {
    return Scenario{std::move(name), params,   control_value(params), side,
                    std::move(grid), scale, analysis, PhysicalConstants{}};
}

WellAnalysis analyze(const DoubleWellParams& params, double hbar) {
    if (const auto* ion = std::get_if<IonQuarticParams>(&params))
        return ion_minima(*ion, hbar).first;
    return atom_minima(std::get<AtomLatticeParams>(params), hbar).first;
}

}  // namespace

Scenario make_custom_scenario(const DoubleWellParams& params, WellSide side, int n_points,
                              double span_a0) {
    PhysicalConstants c;
    const WellAnalysis analysis = analyze(params, c.hbar);
    const double mass = particle_mass(params);
    const UnitScale scale = UnitScale::oscillator(mass, analysis.omega_ref, c.hbar);

    double center_si;
    if (std::holds_alternative<IonQuarticParams>(params)) {
        // windowed grid around the chosen well, centered on its mean position
        const double lam = control_value(params);
        const double x_a = well_minimum(params, side);
        const double x_b = well_minimum(with_control(params, -lam), side);
        center_si = 0.5 * (x_a + x_b);
    } else {
        center_si = 0.0;  // full-domain grid spanning both wells
    }
    const double center = scale.length_to_internal(center_si);
    Grid grid(center - 0.5 * span_a0, center + 0.5 * span_a0, n_points);
    return finalize_scenario("custom", params, side, std::move(grid), scale, analysis);
}

Scenario make_ion_scenario(WellSide side, int n_points, double span_a0) {
    PhysicalConstants c;
    IonQuarticParams p{-4.7e-12, 5.2e-3, 86.4e-21, kMassBe9_u * c.atomic_mass_unit};
    Scenario s = make_custom_scenario(p, side, n_points, span_a0);
    s.name = "ion-be9";
    return s;
}

Scenario make_atom_scenario(WellSide side, int n_points, double span_dl) {
    PhysicalConstants c;
    AtomLatticeParams p{2.0 * M_PI * 59.4, 1.4e3 * c.planck(), 5.18e-6, 200e-9,
                        kMassRb87_u * c.atomic_mass_unit};
    const WellAnalysis analysis = atom_minima(p, c.hbar).first;
    const UnitScale scale = UnitScale::oscillator(p.mass, analysis.omega_ref, c.hbar);
    const double half_span = scale.length_to_internal(0.5 * span_dl * p.d_lattice);
    Grid grid(-half_span, half_span, n_points);
    Scenario s = finalize_scenario("atom-rb87", p, side, std::move(grid), scale, analysis);
    return s;
}

Eigen::VectorXd scenario_potential(const Scenario& s, double lambda, double extra_slope_si) {
    const DoubleWellParams p = with_control(s.params, lambda);
    // constant reference offset keeps internal energies O(1)
    const double v_ref = potential_at(s.params, well_minimum(s.params, s.well_choice));
    const int n = s.grid.size();
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) {
        const double x_si = s.scale.length_to_si(s.grid.x()[i]);
        v[i] = s.scale.energy_to_internal(potential_at(p, x_si) + extra_slope_si * x_si - v_ref);
    }
    return v;
}

EigenSolution scenario_spectrum(const Scenario& s, double lambda, int k) {
    return solve_stationary(scenario_potential(s, lambda), s.grid, 1.0, 1.0, k);
}

std::pair<Wavefunction, double> well_ground_state(const Scenario& s, double lambda, bool exact) {
    const DoubleWellParams p = with_control(s.params, lambda);
    Wavefunction state(s.grid);
    if (exact) {
        if (s.is_ion()) {
            // windowed single-well grid: the window ground state is the well state
            EigenSolution sol = scenario_spectrum(s, lambda, 2);
            state = sol.states[0];
        } else {
            EigenSolution sol = scenario_spectrum(s, lambda, 6);
            const double barrier =
                s.scale.length_to_internal(barrier_position(p));
            const auto labels = classify_wells(sol, barrier);
            const int idx = lowest_on_side(labels, s.well_choice);
            if (idx < 0) throw Ambiguous("well_ground_state: no state on the requested side");
            state = sol.states[idx];
        }
    } else {
        const double x_min = well_minimum(p, s.well_choice);
        const double omega = std::sqrt(potential_second_derivative_at(p, x_min) /
                                       particle_mass(p));
        state = harmonic_eigenstate(0, omega / s.analysis.omega_ref,
                                    s.scale.length_to_internal(x_min), 1.0, 1.0, s.grid);
    }
    const double energy = expectation_energy(state, scenario_potential(s, lambda), 1.0, 1.0);
    return {state, energy};
}

double sudden_fidelity(const Scenario& s) {
    const auto [psi0, e0] = well_ground_state(s, s.lambda0);
    const auto [tgt, e1] = well_ground_state(s, -s.lambda0);
    return std::abs(inner_product(tgt, psi0));
}

double displacement_ratio(const Scenario& s) { return s.analysis.ratio; }

namespace {

struct PreparedRun {
    Wavefunction psi0;
    Wavefunction target;
    double e_target;          // internal
    Eigen::VectorXd v_final;  // internal
    double sudden_ref;
};

PreparedRun prepare(const Scenario& s, double lambda_start, double lambda_end, bool exact) {
    auto [psi0, e0] = well_ground_state(s, lambda_start, exact);
    auto [tgt, e1] = well_ground_state(s, lambda_end, exact);
    PreparedRun pr{std::move(psi0), std::move(tgt), e1, scenario_potential(s, lambda_end), 0.0};
    pr.sudden_ref = std::abs(inner_product(pr.target, pr.psi0));
    return pr;
}

RunMetrics run_prepared(const Scenario& s, const ProtocolSpec& spec, const RunOptions& opt,
                        const PreparedRun& pr, PropagationResult* out) {
    RunMetrics m{};
    m.protocol_kind = spec.kind;
    m.t_final = spec.t_final;
    m.sudden_fidelity_reference = pr.sudden_ref;
    m.ratio_R = s.analysis.ratio;
    m.initial_energy = s.scale.energy_to_si(pr.e_target);

    if (spec.kind == ProtocolKind::Sudden) {
        m.fidelity = pr.sudden_ref;
        m.excitation_energy = s.scale.energy_to_si(
            expectation_energy(pr.psi0, pr.v_final, 1.0, 1.0) - pr.e_target);
        return m;
    }

    const double scale_lam = std::max(std::abs(spec.lambda_start), std::abs(spec.lambda_end));
    const MinimaCurve curve(s.params, s.well_choice, scale_lam > 0.0 ? scale_lam : 1.0);
    const bool compensated = spec.kind == ProtocolKind::PolynomialCompensated;
    const double mass_si = particle_mass(s.params);

    PotentialProvider provider = [&](double t_int, Eigen::VectorXd& v) {
        const double t = s.scale.time_to_si(t_int);
        const double lam = lambda_at(spec, t);
        double slope = 0.0;       // SI J/m added to the potential
        double lam_used = lam;
        if (compensated) {
            const double acc = curve.acceleration(lam, lambda_dot_at(spec, t),
                                                  lambda_ddot_at(spec, t));
            if (s.is_ion())
                lam_used = lam - mass_si * acc;  // gamma_eff
            else
                slope = -mass_si * acc;
        }
        v = scenario_potential(s, lam_used, slope);
    };

    PropagationConfig cfg;
    const double tf_int = s.scale.time_to_internal(spec.t_final);
    double dt_int = opt.dt > 0.0 ? s.scale.time_to_internal(opt.dt) : 2.0 * M_PI / 2000.0;
    dt_int = std::min(dt_int, 2.0 * M_PI / 200.0);  // resolution floor
    if (opt.min_steps > 0) dt_int = std::min(dt_int, tf_int / opt.min_steps);
    cfg.dt = dt_int;
    cfg.store_every = opt.store_every;
    cfg.record_snapshots = opt.record_snapshots;

    PropagationResult res = propagate(pr.psi0, provider, 1.0, 1.0, tf_int, cfg);
    m.fidelity = std::abs(inner_product(pr.target, res.final_state));
    m.excitation_energy = s.scale.energy_to_si(
        expectation_energy(res.final_state, pr.v_final, 1.0, 1.0) - pr.e_target);
    m.norm_drift = (res.norm_history.array() - 1.0).abs().maxCoeff();
    if (out) *out = std::move(res);
    return m;
}

}  // namespace

RunMetrics run_protocol_detailed(const Scenario& s, const ProtocolSpec& spec,
                                 const RunOptions& opt, PropagationResult* out) {
    const ValidityReport rep = validity_report(
        s.params, std::max(std::abs(spec.lambda_start), std::abs(spec.lambda_end)));
    if (rep.status == ValidityStatus::Fail)
        throw ValidityViolation("run_protocol: control exceeds the validity regime");
    const PreparedRun pr = prepare(s, spec.lambda_start, spec.lambda_end, opt.exact_eigenstates);
    return run_prepared(s, spec, opt, pr, out);
}

RunMetrics run_protocol(const Scenario& s, const ProtocolSpec& spec, const RunOptions& opt) {
    return run_protocol_detailed(s, spec, opt, nullptr);
}

std::vector<SweepCell> sweep_tf(const Scenario& s, const std::vector<ProtocolKind>& kinds,
                                const std::vector<double>& tf_grid, const RunOptions& opt) {
    std::vector<SweepCell> cells;
    for (ProtocolKind k : kinds)
        for (double tf : tf_grid) cells.push_back({k, tf, {}, false, ""});

    // endpoint states shared by every cell
    const PreparedRun pr = prepare(s, s.lambda0, -s.lambda0, opt.exact_eigenstates);

    int n_threads = static_cast<int>(std::thread::hardware_concurrency());
    if (const char* env = std::getenv("BIASFLIP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) n_threads = cap;
    }
    n_threads = std::max(1, std::min<int>(n_threads, static_cast<int>(cells.size())));

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= cells.size()) return;
            SweepCell& cell = cells[i];
            try {
                ProtocolSpec spec;
                switch (cell.kind) {
                    case ProtocolKind::Sudden: spec = build_sudden(s.lambda0, -s.lambda0); break;
                    case ProtocolKind::Polynomial:
                        spec = build_polynomial(s.lambda0, -s.lambda0, cell.t_final); break;
                    case ProtocolKind::Faquad:
                        spec = build_faquad(s.lambda0, -s.lambda0, cell.t_final); break;
                    case ProtocolKind::PolynomialCompensated:
                        spec = build_polynomial_compensated(s.lambda0, -s.lambda0, cell.t_final);
                        break;
                }
                cell.metrics = run_prepared(s, spec, opt, pr, nullptr);
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
        }
    };
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return cells;
}

HardwareEstimate hardware_feasibility(const Scenario& s, double t_f) {
    if (s.is_ion())
        throw WrongScenario("hardware_feasibility: magnetic/dipole estimates are for neutral atoms");
    const double d = s.analysis.displacement;
    HardwareEstimate h{};
    h.a_max_lower_bound = 2.0 * d / (t_f * t_f);
    h.a_peak = 10.0 / std::sqrt(3.0) * d / (t_f * t_f);  // quintic peak |x0_ddot|
    const double mass = particle_mass(s.params);
    h.gradient_T_per_m = mass * h.a_peak / s.constants.bohr_magneton;
    h.polarizability = kRbPolarizability;
    h.dipole_power_over_waist_cubed = mass * h.a_peak / h.polarizability;
    return h;
}

}  // namespace biasflip
