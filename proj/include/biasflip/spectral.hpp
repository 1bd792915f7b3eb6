#ifndef BIASFLIP_SPECTRAL_HPP
#define BIASFLIP_SPECTRAL_HPP

#include <vector>

#include <Eigen/Dense>

#include "biasflip/potentials.hpp"
#include "biasflip/wavefunction.hpp"

namespace biasflip {

struct EigenSolution {
    Eigen::VectorXd energies;          // ascending
    std::vector<Wavefunction> states;  // orthonormal, real phases
    Grid grid;
};

struct SolveOptions {
    enum class Method { FourierGrid, FiniteDifference };
    Method method = Method::FourierGrid;
    /// When set, re-solve on a doubled grid and throw GridTooCoarse if any
    /// requested level moves by more than 1e-6 relative.
    bool check_refinement = false;
};

/// Lowest k eigenpairs of H = p^2/2m + V on the grid. FourierGrid builds the
/// spectrally exact periodic kinetic matrix; FiniteDifference the symmetric
/// tridiagonal second-order stencil.
EigenSolution solve_stationary(const Eigen::VectorXd& potential_samples, const Grid& grid,
                               double mass, double hbar, int k, const SolveOptions& opt = {});

struct WellLabel {
    WellSide side;
    double mass_fraction;  // probability on the labeled side of the barrier
    int index_in_spectrum;
};

/// Per-state left/right labels by probability mass relative to barrier_x.
/// Throws Ambiguous when a state is delocalized (fraction in [0.45, 0.55]).
std::vector<WellLabel> classify_wells(const EigenSolution& sol, double barrier_x);

/// Minimal spectrum index among states labeled with the given side; -1 if none.
int lowest_on_side(const std::vector<WellLabel>& labels, WellSide side);

/// Normalized Hermite-Gaussian phi_n centered at `center`.
Wavefunction harmonic_eigenstate(int n, double omega, double center, double mass, double hbar,
                                 const Grid& grid);

}  // namespace biasflip

#endif
