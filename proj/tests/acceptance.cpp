// Acceptance gate: nine numbered criteria, one verdict line each.
// Exit code is the number of failed criteria.

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "biasflip/dynamics.hpp"
#include "biasflip/experiments.hpp"
#include "biasflip/io.hpp"
#include "biasflip/protocols.hpp"
#include "biasflip/spectral.hpp"

using namespace biasflip;

namespace {

int g_failures = 0;

struct Criterion {
    int id;
    std::string label;
    bool ok = true;
    std::string detail;

    void check(bool pass, const std::string& what) {
        if (!pass) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void within(double value, double expected, double rel, const std::string& name) {
        const bool pass = std::abs(value - expected) <= rel * std::abs(expected);
        char buf[160];
        std::snprintf(buf, sizeof(buf), "%s = %.6g (expected %.6g +-%g%%)", name.c_str(), value,
                      expected, 100.0 * rel);
        if (!pass) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += buf;
        }
    }
    void report() const {
        std::printf("criterion %d [%s]: %s%s%s\n", id, label.c_str(), ok ? "PASS" : "FAIL",
                    detail.empty() ? "" : " -- ", detail.c_str());
        if (!ok) ++g_failures;
        std::fflush(stdout);
    }
};

double oracle_excitation(const Scenario& s, const ProtocolSpec& spec) {
    // (m/2) |integral of x0_ddot e^{i Omega0 t} dt|^2, Simpson quadrature
    const MinimaCurve curve(s.params, s.well_choice, std::abs(s.lambda0));
    const int n = 4000;
    const double h = spec.t_final / n;
    std::complex<double> integral = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double acc =
            curve.acceleration(lambda_at(spec, t), lambda_dot_at(spec, t), lambda_ddot_at(spec, t));
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        integral += w * acc * std::exp(std::complex<double>(0.0, s.omega0() * t));
    }
    integral *= h / 3.0;
    return 0.5 * particle_mass(s.params) * std::norm(integral);
}

void criterion1() {
    Criterion c{1, "ion analytics"};
    const Scenario s = make_ion_scenario();
    c.within(s.omega0(), 2 * M_PI * 5.6e6, 0.02, "Omega0");
    c.within(s.analysis.displacement, 9.2e-9, 0.02, "d");
    c.within(s.analysis.ratio, 0.65, 0.02 / 0.65, "R");

    // moderate bias: gamma0 of order hbar*Omega0/D
    const double gamma_mod = s.constants.hbar * s.omega0() / s.analysis.distance;
    const auto [mod, ci] = ion_minima(std::get<IonQuarticParams>(s.params).with_control(gamma_mod),
                                      s.constants.hbar);
    c.within(mod.ratio, 0.00065, 0.10, "moderate-bias R");

    const ValidityReport rep = validity_report(s.params, std::abs(s.lambda0));
    c.within(rep.freq_variation, 2 * M_PI * 3.7e3, 0.15, "freq variation");
    c.within(rep.distance_variation, 3e-12, 0.50, "distance variation");
    (void)ci;
    c.report();
}

void criterion2() {
    Criterion c{2, "atom analytics"};
    const Scenario s = make_atom_scenario();
    c.within(s.analysis.distance, 5e-6, 0.02, "D");
    c.within(s.analysis.bias, 2.02e-32, 0.03, "bias");
    c.within(s.omega0(), 2 * M_PI * 0.35e3, 0.03, "Omega0");
    c.within(s.analysis.ratio, 0.67, 0.03 / 0.67, "R");
    c.within(s.analysis.displacement, 0.4e-6, 0.10, "per-minimum displacement");
    const ValidityReport rep = validity_report(s.params, std::abs(s.lambda0));
    c.within(rep.distance_variation, 1.8e-9, 0.30, "D deviation");
    c.within(rep.freq_variation, 2 * M_PI * 0.2, 0.50, "freq variation");
    c.report();
}

void criterion3() {
    Criterion c{3, "sudden fidelities"};
    const Scenario ion = make_ion_scenario();
    const Scenario atom = make_atom_scenario();
    const double f_ion = sudden_fidelity(ion);
    const double f_atom = sudden_fidelity(atom);
    c.within(f_ion, 0.89, 0.01 / 0.89, "ion sudden F");
    c.within(f_atom, 0.90, 0.01 / 0.90, "atom sudden F");
    const double g_ion = std::exp(-ion.analysis.ratio * ion.analysis.ratio / 4.0);
    const double g_atom = std::exp(-atom.analysis.ratio * atom.analysis.ratio / 4.0);
    c.check(std::abs(f_ion - g_ion) < 0.01, "ion gaussian-overlap oracle off by >= 0.01");
    c.check(std::abs(f_atom - g_atom) < 0.01, "atom gaussian-overlap oracle off by >= 0.01");
    c.report();
}

void criterion4() {
    Criterion c{4, "compensated shortcut"};
    const Scenario ion = make_ion_scenario();
    std::vector<double> tf_ion;
    for (int i = 0; i < 10; ++i) tf_ion.push_back(0.02e-6 + (0.5e-6 - 0.02e-6) * i / 9.0);
    std::vector<double> tf_atom{63e-6};
    for (int i = 0; i < 9; ++i) tf_atom.push_back(20e-6 + (500e-6 - 20e-6) * i / 8.0);

    for (const Scenario* s : {&ion}) {
        const auto cells = sweep_tf(*s, {ProtocolKind::PolynomialCompensated}, tf_ion);
        for (const auto& cell : cells) {
            c.check(cell.ok, "ion cell failed at tf=" + io::format_double(cell.t_final));
            if (!cell.ok) continue;
            char buf[120];
            std::snprintf(buf, sizeof(buf), "ion tf=%.3g: F=%.6f", cell.t_final,
                          cell.metrics.fidelity);
            c.check(cell.metrics.fidelity >= 0.999, buf);
            c.check(cell.metrics.excitation_energy <= 1e-3 * s->scale.energy_J,
                    std::string("ion E_ex above 1e-3 quantum at tf=") +
                        io::format_double(cell.t_final));
        }
    }
    const Scenario atom = make_atom_scenario();
    const auto cells = sweep_tf(atom, {ProtocolKind::PolynomialCompensated}, tf_atom);
    for (const auto& cell : cells) {
        c.check(cell.ok, "atom cell failed at tf=" + io::format_double(cell.t_final));
        if (!cell.ok) continue;
        char buf[120];
        std::snprintf(buf, sizeof(buf), "atom tf=%.3g: F=%.6f", cell.t_final,
                      cell.metrics.fidelity);
        c.check(cell.metrics.fidelity >= 0.999, buf);
        c.check(cell.metrics.excitation_energy <= 1e-3 * atom.scale.energy_J,
                std::string("atom E_ex above 1e-3 quantum at tf=") +
                    io::format_double(cell.t_final));
    }
    c.report();
}

void criterion5() {
    Criterion c{5, "faquad fidelity peaks"};
    const Scenario ion = make_ion_scenario();
    const double period = ion.period();
    // two 20-point windows, 1% spacing, bracketing one and two trap periods
    for (double center : {period, 2.0 * period}) {
        std::vector<double> tf;
        for (int i = 0; i < 20; ++i) tf.push_back(center * (0.905 + 0.01 * i));
        const auto cells = sweep_tf(ion, {ProtocolKind::Faquad}, tf);
        int best = -1;
        double f_best = -1.0;
        for (size_t i = 0; i < cells.size(); ++i) {
            if (!cells[i].ok) continue;
            if (cells[i].metrics.fidelity > f_best) {
                f_best = cells[i].metrics.fidelity;
                best = static_cast<int>(i);
            }
        }
        char buf[160];
        std::snprintf(buf, sizeof(buf), "window at %.3g: best F=%.6f at tf=%.4g", center, f_best,
                      best >= 0 ? tf[best] : -1.0);
        c.check(best > 0 && best < 19, std::string("peak not interior; ") + buf);
        c.check(f_best >= 0.9999, buf);
        if (best >= 0) c.check(std::abs(tf[best] - center) <= 0.02 * center, buf);
    }
    c.report();
}

void criterion6() {
    Criterion c{6, "forced-oscillator oracle"};
    const Scenario ion = make_ion_scenario();
    const double period = ion.period();
    for (double mult : {1.0, 1.4, 1.8, 2.2}) {
        const double tf = mult * period;
        const ProtocolSpec spec = build_polynomial(ion.lambda0, -ion.lambda0, tf);
        const RunMetrics m = run_protocol(ion, spec);
        const double predicted = oracle_excitation(ion, spec);
        if (m.excitation_energy < 1e-4 * ion.scale.energy_J) continue;
        char buf[160];
        std::snprintf(buf, sizeof(buf), "tf=%.3g: E_ex=%.4g oracle=%.4g", tf,
                      m.excitation_energy, predicted);
        c.check(std::abs(m.excitation_energy - predicted) <= 0.05 * predicted, buf);
    }
    c.report();
}

void criterion7() {
    Criterion c{7, "propagator health"};
    Grid g(-16.0, 16.0, 256);
    const Eigen::VectorXd v = (0.5 * g.x().array().square()).matrix();
    const EigenSolution sol = solve_stationary(v, g, 1.0, 1.0, 6);
    for (int n = 0; n <= 5; ++n)
        c.check(std::abs(sol.energies[n] - (n + 0.5)) <= 1e-6 * (n + 0.5),
                "harmonic level " + std::to_string(n) + " off");

    PotentialProvider stat = [&](double, Eigen::VectorXd& out) { out = v; };
    PropagationConfig cfg;
    const double t_final = 10.0 * 2.0 * M_PI;
    cfg.dt = t_final / 10000.0;  // ten periods in 1e4 steps
    const PropagationResult res = propagate(sol.states[0], stat, 1.0, 1.0, t_final, cfg);
    c.check((res.norm_history.array() - 1.0).abs().maxCoeff() < 1e-9, "norm drift >= 1e-9");
    c.check(std::abs(inner_product(sol.states[0], res.final_state)) > 1.0 - 1e-8,
            "autocorrelation below 1 - 1e-8");

    PotentialProvider driven = [&](double t, Eigen::VectorXd& out) {
        out = (0.5 * (g.x().array() - 0.5 * std::sin(t)).square()).matrix();
    };
    PropagationConfig ccfg;
    ccfg.dt = 3.0 / 400.0;
    const ConvergenceReport rep = convergence_check(sol.states[0], driven, 1.0, 1.0, 3.0, ccfg);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "order ratio %.3f outside [3.5, 4.5]", rep.order_ratio);
    c.check(rep.order_ratio >= 3.5 && rep.order_ratio <= 4.5, buf);
    c.report();
}

void criterion8() {
    Criterion c{8, "rigid-transport exactness"};
    Grid g(-24.0, 24.0, 512);
    const Eigen::VectorXd v0 = (0.5 * g.x().array().square()).matrix();
    const Wavefunction psi0 = solve_stationary(v0, g, 1.0, 1.0, 1).states[0];
    const double d = 5.0;
    const Wavefunction target = displacement_unitary_apply(psi0, d, 0.0, 1.0, 1.0);
    for (double tf : {2.0 * M_PI / 20.0, 1.3, 5.0}) {
        const ProtocolSpec ramp = build_polynomial(0.0, d, tf);
        PotentialProvider provider = [&](double t, Eigen::VectorXd& out) {
            out = (0.5 * (g.x().array() - lambda_at(ramp, t)).square() -
                   lambda_ddot_at(ramp, t) * g.x().array())
                      .matrix();
        };
        PropagationConfig cfg;
        cfg.dt = std::min(tf, 2.0 * M_PI) / 4000.0;
        const PropagationResult res = propagate(psi0, provider, 1.0, 1.0, tf, cfg);
        const double f = std::abs(inner_product(target, res.final_state));
        char buf[80];
        std::snprintf(buf, sizeof(buf), "tf=%.4g: 1-F=%.3g", tf, 1.0 - f);
        c.check(f > 1.0 - 1e-8, buf);
    }
    c.report();
}

void criterion9() {
    Criterion c{9, "sudden and adiabatic limits"};
    for (bool is_ion : {true, false}) {
        const Scenario s = is_ion ? make_ion_scenario() : make_atom_scenario();
        const char* tag = is_ion ? "ion" : "atom";
        const double period = s.period();
        const double f_sudden = sudden_fidelity(s);

        const RunMetrics fast = run_protocol(
            s, build_polynomial(s.lambda0, -s.lambda0, period / 100.0));
        char buf[120];
        std::snprintf(buf, sizeof(buf), "%s fast limit F=%.4f vs sudden %.4f", tag, fast.fidelity,
                      f_sudden);
        c.check(std::abs(fast.fidelity - f_sudden) <= 0.01, buf);

        RunOptions coarse;  // accuracy of +-0.01 only; allow a coarser step
        coarse.dt = period / 250.0;
        coarse.min_steps = 1000;
        const RunMetrics slow =
            run_protocol(s, build_polynomial(s.lambda0, -s.lambda0, 50.0 * period), coarse);
        std::snprintf(buf, sizeof(buf), "%s adiabatic limit F=%.4f", tag, slow.fidelity);
        c.check(std::abs(slow.fidelity - 1.0) <= 0.01, buf);
    }
    c.report();
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    if (g_failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", g_failures);
    return g_failures;
}
