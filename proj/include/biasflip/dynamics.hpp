#ifndef BIASFLIP_DYNAMICS_HPP
#define BIASFLIP_DYNAMICS_HPP

#include <functional>

#include <Eigen/Dense>

#include "biasflip/wavefunction.hpp"

namespace biasflip {

/// Fills `out` with V(x_i; t) on the propagation grid. The compensated
/// linear term, when present, is the provider's responsibility.
using PotentialProvider = std::function<void(double t, Eigen::VectorXd& out)>;

struct PropagationConfig {
    double dt = 0.0;        // step; 0 selects t_final / 2000
    int store_every = 1;    // energy/norm sampling stride
    double absorber = 0.0;  // cos^2 edge mask strength; 0 disables
    bool record_snapshots = false;
    bool check_edges = true;  // fail loudly on density leaking to the grid edge
};

struct PropagationResult {
    Wavefunction final_state;
    Eigen::VectorXd times;           // sampled at the store stride
    Eigen::VectorXd norm_history;
    Eigen::VectorXd energy_history;  // J, evaluated with the midpoint-time potential
    Eigen::MatrixXd density_snapshots;  // rows = sampled times, cols = |psi(x_i)|^2
};

/// Strang-split propagation of i hbar d/dt psi = (p^2/2m + V(x,t)) psi with
/// the potential evaluated at the step midpoint. Global error O(dt^2); the
/// splitting is unitary, so the norm is conserved to rounding.
PropagationResult propagate(const Wavefunction& psi0, const PotentialProvider& potential,
                            double mass, double hbar, double t_final,
                            const PropagationConfig& config);

struct ConvergenceReport {
    double discrepancy_dt;      // ||psi(dt) - psi(dt/2)||
    double discrepancy_half;    // ||psi(dt/2) - psi(dt/4)||
    double order_ratio;         // discrepancy_dt / discrepancy_half, ~4 at second order
    bool second_order;          // order_ratio in [3.5, 4.5]
};

/// Self-convergence probe at dt, dt/2, dt/4. Throws NotConverged when the
/// dt/2 discrepancy exceeds 1e-6.
ConvergenceReport convergence_check(const Wavefunction& psi0, const PotentialProvider& potential,
                                    double mass, double hbar, double t_final,
                                    const PropagationConfig& config);

}  // namespace biasflip

#endif
