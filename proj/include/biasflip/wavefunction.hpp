#ifndef BIASFLIP_WAVEFUNCTION_HPP
#define BIASFLIP_WAVEFUNCTION_HPP

#include <complex>

#include <Eigen/Dense>

#include "biasflip/grid.hpp"

namespace biasflip {

struct Wavefunction {
    Grid grid;
    Eigen::VectorXcd amplitudes;

    Wavefunction(Grid g, Eigen::VectorXcd a) : grid(std::move(g)), amplitudes(std::move(a)) {}
    explicit Wavefunction(Grid g) : grid(std::move(g)), amplitudes(Eigen::VectorXcd::Zero(grid.size())) {}

    /// sqrt(sum |psi_i|^2 dx)
    double norm() const { return std::sqrt(amplitudes.squaredNorm() * grid.dx()); }
};

/// Rescale to unit norm. Throws ZeroNorm when the quadrature norm underflows.
Wavefunction normalize(const Wavefunction& psi);

/// sum conj(a_i) b_i dx. Throws GridMismatch.
std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b);

/// <psi| p^2/2m + V |psi>, kinetic part evaluated spectrally.
double expectation_energy(const Wavefunction& psi, const Eigen::VectorXd& potential_samples,
                          double mass, double hbar);

double expectation_position(const Wavefunction& psi);

/// Kinetic energy by second-order central finite differences (periodic wrap);
/// cross-check for the spectral evaluation.
double kinetic_energy_fd(const Wavefunction& psi, double mass, double hbar);

}  // namespace biasflip

#endif
