#include "biasflip/dynamics.hpp"

#include <cmath>
#include <vector>

#include <unsupported/Eigen/FFT>

#include "biasflip/errors.hpp"

namespace biasflip {

PropagationResult propagate(const Wavefunction& psi0, const PotentialProvider& potential,
                            double mass, double hbar, double t_final,
                            const PropagationConfig& config) {
    const int n = psi0.grid.size();
    const double dx = psi0.grid.dx();
    const double dt_req = config.dt > 0.0 ? config.dt : t_final / 2000.0;
    const int n_steps = std::max(1, static_cast<int>(std::ceil(t_final / dt_req - 1e-9)));
    const double dt = t_final / n_steps;
    const int stride = std::max(1, config.store_every);

    Eigen::FFT<double> fft;
    Eigen::VectorXcd psi = psi0.amplitudes;
    Eigen::VectorXcd spec(n);
    Eigen::VectorXd v(n);

    // kinetic full-step phases
    Eigen::VectorXcd kin(n);
    for (int i = 0; i < n; ++i) {
        const double k = psi0.grid.k()[i];
        kin[i] = std::exp(std::complex<double>(0.0, -0.5 * hbar * k * k / mass * dt));
    }

    Eigen::VectorXd mask;
    if (config.absorber > 0.0) {
        mask.resize(n);
        const int edge = n / 10;
        for (int i = 0; i < n; ++i) {
            double m = 1.0;
            if (i < edge) m = std::pow(std::sin(0.5 * M_PI * i / edge), config.absorber);
            else if (i >= n - edge)
                m = std::pow(std::sin(0.5 * M_PI * (n - 1 - i) / edge), config.absorber);
            mask[i] = m;
        }
    }

    const int n_stored = n_steps / stride + 1;
    PropagationResult res{Wavefunction(psi0.grid), Eigen::VectorXd(n_stored),
                          Eigen::VectorXd(n_stored), Eigen::VectorXd(n_stored), {}};
    if (config.record_snapshots) res.density_snapshots.resize(n_stored, n);

    int stored = 0;
    auto record = [&](int step, double t_probe) {
        potential(std::min(t_probe, t_final), v);
        Wavefunction cur(psi0.grid, psi);
        const double e = expectation_energy(cur, v, mass, hbar);
        const double norm2 = psi.squaredNorm() * dx;
        res.times[stored] = step * dt;
        res.norm_history[stored] = std::sqrt(norm2);
        res.energy_history[stored] = e;
        if (config.record_snapshots)
            res.density_snapshots.row(stored) = psi.array().abs2().matrix().transpose();
        ++stored;
        // potential offsets, tilts and frame kinetic energy all drift
        // legitimately under fast driving; only non-finite values are fatal
        if (!std::isfinite(e) || !std::isfinite(norm2))
            throw UnstableStep("propagate: non-finite energy or norm");
        if (config.absorber == 0.0 && std::abs(std::sqrt(norm2) - 1.0) > 1e-6)
            throw NormLoss("propagate: norm drift beyond 1e-6 without absorber");
    };
    record(0, 0.5 * dt);

    for (int step = 0; step < n_steps; ++step) {
        const double t_mid = (step + 0.5) * dt;
        potential(t_mid, v);
        for (int i = 0; i < n; ++i)
            psi[i] *= std::exp(std::complex<double>(0.0, -0.5 * v[i] * dt / hbar));
        fft.fwd(spec, psi);
        spec.array() *= kin.array();
        fft.inv(psi, spec);
        for (int i = 0; i < n; ++i)
            psi[i] *= std::exp(std::complex<double>(0.0, -0.5 * v[i] * dt / hbar));
        if (mask.size() > 0) psi.array() *= mask.array();
        if ((step + 1) % stride == 0) record(step + 1, (step + 0.5) * dt);
    }
    res.times.conservativeResize(stored);
    res.norm_history.conservativeResize(stored);
    res.energy_history.conservativeResize(stored);
    if (config.record_snapshots) res.density_snapshots.conservativeResize(stored, n);

    if (config.check_edges && config.absorber == 0.0) {
        double edge_density = 0.0;
        for (int i = 0; i < 5; ++i)
            edge_density = std::max({edge_density, std::norm(psi[i]), std::norm(psi[n - 1 - i])});
        if (edge_density * dx > 1e-12)
            throw Error("propagate: density reached the grid edge; enlarge the grid");
    }

    res.final_state = Wavefunction(psi0.grid, std::move(psi));
    return res;
}

ConvergenceReport convergence_check(const Wavefunction& psi0, const PotentialProvider& potential,
                                    double mass, double hbar, double t_final,
                                    const PropagationConfig& config) {
    PropagationConfig c = config;
    c.record_snapshots = false;
    c.store_every = 1 << 20;  // endpoints only

    const double dt = c.dt > 0.0 ? c.dt : t_final / 2000.0;
    std::vector<Eigen::VectorXcd> finals;
    for (double d : {dt, dt / 2.0, dt / 4.0}) {
        c.dt = d;
        finals.push_back(propagate(psi0, potential, mass, hbar, t_final, c).final_state.amplitudes);
    }
    const double dx = psi0.grid.dx();
    ConvergenceReport rep{};
    rep.discrepancy_dt = std::sqrt((finals[0] - finals[1]).squaredNorm() * dx);
    rep.discrepancy_half = std::sqrt((finals[1] - finals[2]).squaredNorm() * dx);
    rep.order_ratio = rep.discrepancy_half > 0.0 ? rep.discrepancy_dt / rep.discrepancy_half : 0.0;
    rep.second_order = rep.order_ratio >= 3.5 && rep.order_ratio <= 4.5;
    if (rep.discrepancy_half > 1e-6)
        throw NotConverged("convergence_check: dt/2 discrepancy exceeds 1e-6");
    return rep;
}

}  // namespace biasflip
