#include <cmath>
#include <complex>

#include <doctest.h>

#include "biasflip/dynamics.hpp"
#include "biasflip/errors.hpp"
#include "biasflip/protocols.hpp"
#include "biasflip/spectral.hpp"

using namespace biasflip;

namespace {

Eigen::VectorXd harmonic_v(const Grid& g) { return (0.5 * g.x().array().square()).matrix(); }

PotentialProvider static_potential(Eigen::VectorXd v) {
    return [v = std::move(v)](double, Eigen::VectorXd& out) { out = v; };
}

}  // namespace

TEST_CASE("stationary state: norm and autocorrelation over ten periods") {
    Grid g(-16.0, 16.0, 256);
    const EigenSolution sol = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1);
    const Wavefunction psi0 = sol.states[0];

    PropagationConfig cfg;
    const double t_final = 10.0 * 2.0 * M_PI;
    cfg.dt = t_final / 10000.0;
    const PropagationResult res =
        propagate(psi0, static_potential(harmonic_v(g)), 1.0, 1.0, t_final, cfg);

    CHECK((res.norm_history.array() - 1.0).abs().maxCoeff() < 1e-9);
    CHECK(std::abs(inner_product(psi0, res.final_state)) > 1.0 - 1e-8);
    // accumulated phase e^{-i E0 t}
    const std::complex<double> ov = inner_product(psi0, res.final_state);
    const double phase = std::arg(ov);
    const double expected = std::remainder(-sol.energies[0] * t_final, 2.0 * M_PI);
    CHECK(phase == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("coherent state follows the classical trajectory") {
    Grid g(-16.0, 16.0, 256);
    const Wavefunction ground = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    const double x0 = 2.0;
    Wavefunction psi = displacement_unitary_apply(ground, x0, 0.0, 1.0, 1.0);

    PropagationConfig cfg;
    cfg.dt = 2.0 * M_PI / 2000.0;
    cfg.store_every = 100;
    const PropagationResult res =
        propagate(psi, static_potential(harmonic_v(g)), 1.0, 1.0, 2.0 * M_PI, cfg);
    // <x>(t) = x0 cos t, so one full period returns the packet
    CHECK(expectation_position(res.final_state) == doctest::Approx(x0).epsilon(1e-4));
    CHECK(std::abs(inner_product(psi, res.final_state)) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("driven oscillator obeys ehrenfest against an rk4 oracle") {
    Grid g(-16.0, 16.0, 512);
    const Wavefunction psi0 = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    auto force = [](double t) { return 0.3 * std::sin(1.7 * t); };
    PotentialProvider provider = [&](double t, Eigen::VectorXd& out) {
        out = (0.5 * g.x().array().square() - force(t) * g.x().array()).matrix();
    };
    const double t_final = 6.0;
    PropagationConfig cfg;
    cfg.dt = t_final / 6000.0;
    const PropagationResult res = propagate(psi0, provider, 1.0, 1.0, t_final, cfg);

    // classical x'' = -x + f(t), x(0) = x'(0) = 0, integrated by rk4
    double x = 0.0, v = 0.0, t = 0.0;
    const double h = t_final / 60000.0;
    for (int i = 0; i < 60000; ++i) {
        auto ax = [&](double tt, double xx) { return -xx + force(tt); };
        const double k1x = v, k1v = ax(t, x);
        const double k2x = v + 0.5 * h * k1v, k2v = ax(t + 0.5 * h, x + 0.5 * h * k1x);
        const double k3x = v + 0.5 * h * k2v, k3v = ax(t + 0.5 * h, x + 0.5 * h * k2x);
        const double k4x = v + h * k3v, k4v = ax(t + h, x + h * k3x);
        x += h / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
        v += h / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
        t += h;
    }
    CHECK(expectation_position(res.final_state) == doctest::Approx(x).epsilon(1e-5));
}

TEST_CASE("excitation energy matches the forced-oscillator quadrature") {
    // quintic-ramp drive f(t) = a(t), excitation (1/2)|∫ a e^{i t} dt|^2
    Grid g(-16.0, 16.0, 512);
    const Wavefunction psi0 = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    const double t_final = 9.0, d = 1.2;
    const ProtocolSpec ramp = build_polynomial(0.0, d, t_final);
    auto accel = [&](double t) { return lambda_ddot_at(ramp, t); };
    // transport frame: V = (x - x0(t))^2/2, no compensation
    PotentialProvider provider = [&](double t, Eigen::VectorXd& out) {
        out = (0.5 * (g.x().array() - lambda_at(ramp, t)).square()).matrix();
    };
    PropagationConfig cfg;
    cfg.dt = t_final / 8000.0;
    const PropagationResult res = propagate(psi0, provider, 1.0, 1.0, t_final, cfg);

    const Wavefunction target = displacement_unitary_apply(psi0, d, 0.0, 1.0, 1.0);
    const Eigen::VectorXd v_final = (0.5 * (g.x().array() - d).square()).matrix();
    const double e_ex = expectation_energy(res.final_state, v_final, 1.0, 1.0) -
                        expectation_energy(target, v_final, 1.0, 1.0);

    // Simpson quadrature of the Fourier transform of the acceleration
    const int n = 4000;
    std::complex<double> integral = 0.0;
    const double h = t_final / n;
    for (int i = 0; i <= n; ++i) {
        const double t = i * h;
        const double w = (i == 0 || i == n) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        integral += w * accel(t) * std::exp(std::complex<double>(0.0, t));
    }
    integral *= h / 3.0;
    const double oracle = 0.5 * std::norm(integral);
    CHECK(e_ex == doctest::Approx(oracle).epsilon(0.02));
}

TEST_CASE("compensated rigid transport is exact") {
    Grid g(-24.0, 24.0, 512);
    const Wavefunction psi0 = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    const double d = 5.0;
    for (double t_final : {2.0 * M_PI / 20.0, 1.1, 4.0}) {
        const ProtocolSpec ramp = build_polynomial(0.0, d, t_final);
        PotentialProvider provider = [&](double t, Eigen::VectorXd& out) {
            const double x0 = lambda_at(ramp, t);
            out = (0.5 * (g.x().array() - x0).square() -
                   lambda_ddot_at(ramp, t) * g.x().array())
                      .matrix();
        };
        PropagationConfig cfg;
        cfg.dt = std::min(t_final / 4000.0, 2.0 * M_PI / 4000.0);
        const PropagationResult res = propagate(psi0, provider, 1.0, 1.0, t_final, cfg);
        const Wavefunction target = displacement_unitary_apply(psi0, d, 0.0, 1.0, 1.0);
        CHECK(std::abs(inner_product(target, res.final_state)) > 1.0 - 1e-8);
    }
}

TEST_CASE("dt halving shows second-order convergence") {
    Grid g(-16.0, 16.0, 256);
    const Wavefunction psi0 = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    PotentialProvider provider = [&](double t, Eigen::VectorXd& out) {
        out = (0.5 * (g.x().array() - 0.5 * std::sin(t)).square()).matrix();
    };
    PropagationConfig cfg;
    cfg.dt = 3.0 / 400.0;
    const ConvergenceReport rep = convergence_check(psi0, provider, 1.0, 1.0, 3.0, cfg);
    CHECK(rep.second_order);
    CHECK(rep.order_ratio == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("non-finite potentials are fatal") {
    Grid g(-8.0, 8.0, 64);
    Eigen::VectorXcd a(g.size());
    for (int i = 0; i < g.size(); ++i) a[i] = std::exp(-0.5 * g.x()[i] * g.x()[i]);
    const Wavefunction psi0 = normalize(Wavefunction(g, a));
    PotentialProvider bad = [&](double, Eigen::VectorXd& out) {
        out = Eigen::VectorXd::Constant(g.size(), std::nan(""));
    };
    PropagationConfig cfg;
    cfg.dt = 0.01;
    cfg.store_every = 1;
    CHECK_THROWS_AS(propagate(psi0, bad, 1.0, 1.0, 1.0, cfg), UnstableStep);
}

TEST_CASE("density reaching the grid edge is fatal") {
    Grid g(-6.0, 6.0, 128);
    Eigen::VectorXcd a(g.size());
    for (int i = 0; i < g.size(); ++i)
        a[i] = std::exp(std::complex<double>(-0.5 * g.x()[i] * g.x()[i], 4.0 * g.x()[i]));
    const Wavefunction psi0 = normalize(Wavefunction(g, a));  // fast free packet
    PropagationConfig cfg;
    cfg.dt = 0.005;
    CHECK_THROWS_AS(propagate(psi0, static_potential(Eigen::VectorXd::Zero(g.size())), 1.0, 1.0,
                              2.0, cfg),
                    Error);
}

TEST_CASE("snapshots have the requested stride and unit row sums") {
    Grid g(-16.0, 16.0, 128);
    const Wavefunction psi0 = solve_stationary(harmonic_v(g), g, 1.0, 1.0, 1).states[0];
    PropagationConfig cfg;
    cfg.dt = 0.01;
    cfg.store_every = 25;
    cfg.record_snapshots = true;
    const PropagationResult res =
        propagate(psi0, static_potential(harmonic_v(g)), 1.0, 1.0, 1.0, cfg);
    CHECK(res.density_snapshots.rows() == res.times.size());
    for (int r = 0; r < res.density_snapshots.rows(); ++r)
        CHECK(res.density_snapshots.row(r).sum() * g.dx() == doctest::Approx(1.0).epsilon(1e-10));
}
