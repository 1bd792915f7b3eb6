#include "biasflip/wavefunction.hpp"

#include <unsupported/Eigen/FFT>

#include "biasflip/errors.hpp"

namespace biasflip {

Wavefunction normalize(const Wavefunction& psi) {
    const double n2 = psi.amplitudes.squaredNorm() * psi.grid.dx();
    if (n2 < 1e-300) throw ZeroNorm("normalize: quadrature norm underflow");
    Wavefunction out = psi;
    out.amplitudes /= std::sqrt(n2);
    return out;
}

std::complex<double> inner_product(const Wavefunction& a, const Wavefunction& b) {
    if (a.grid != b.grid) throw GridMismatch("inner_product: grids differ");
    return a.amplitudes.dot(b.amplitudes) * a.grid.dx();
}

double expectation_energy(const Wavefunction& psi, const Eigen::VectorXd& potential_samples,
                          double mass, double hbar) {
    const int n = psi.grid.size();
    if (potential_samples.size() != n)
        throw GridMismatch("expectation_energy: potential not sampled on psi's grid");
    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(n);
    Eigen::VectorXcd in = psi.amplitudes;
    fft.fwd(spec, in);
    // Parseval: sum |spec|^2 = n * sum |psi|^2
    const Eigen::VectorXd& k = psi.grid.k();
    double kin = 0.0;
    for (int i = 0; i < n; ++i)
        kin += 0.5 * hbar * hbar * k[i] * k[i] / mass * std::norm(spec[i]);
    kin *= psi.grid.dx() / n;
    const double pot = (potential_samples.array() * psi.amplitudes.array().abs2()).sum() * psi.grid.dx();
    return kin + pot;
}

double expectation_position(const Wavefunction& psi) {
    return (psi.grid.x().array() * psi.amplitudes.array().abs2()).sum() * psi.grid.dx();
}

double kinetic_energy_fd(const Wavefunction& psi, double mass, double hbar) {
    const int n = psi.grid.size();
    const double dx = psi.grid.dx();
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
        const auto& a = psi.amplitudes;
        const std::complex<double> lap = (a[(i + 1) % n] - 2.0 * a[i] + a[(i + n - 1) % n]) / (dx * dx);
        acc += std::conj(a[i]) * (-0.5 * hbar * hbar / mass) * lap;
    }
    return (acc * dx).real();
}

}  // namespace biasflip
