#include "biasflip/spectral.hpp"

#include <cmath>

#include "biasflip/errors.hpp"

namespace biasflip {

namespace {

// Periodic Fourier-grid kinetic matrix: T = F^dag diag(hbar^2 k^2 / 2m) F.
// Row/column dependence is on the index offset only, so precompute one pass
// of the spectral sum per offset.
Eigen::MatrixXd fourier_kinetic(const Grid& grid, double mass, double hbar) {
    const int n = grid.size();
    Eigen::VectorXd t_off(n);
    const Eigen::VectorXd& k = grid.k();
    for (int d = 0; d < n; ++d) {
        double acc = 0.0;
        for (int j = 0; j < n; ++j)
            acc += 0.5 * hbar * hbar * k[j] * k[j] / mass * std::cos(k[j] * d * grid.dx());
        t_off[d] = acc / n;
    }
    Eigen::MatrixXd t(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(i, j) = t_off[std::abs(i - j)];
    return t;
}

EigenSolution solve_once(const Eigen::VectorXd& v, const Grid& grid, double mass, double hbar,
                         int k, SolveOptions::Method method) {
    const int n = grid.size();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    if (method == SolveOptions::Method::FourierGrid) {
        Eigen::MatrixXd h = fourier_kinetic(grid, mass, hbar);
        h.diagonal() += v;
        es.compute(h);
    } else {
        const double w = 0.5 * hbar * hbar / (mass * grid.dx() * grid.dx());
        Eigen::VectorXd diag = v.array() + 2.0 * w;
        Eigen::VectorXd sub = Eigen::VectorXd::Constant(n - 1, -w);
        es.computeFromTridiagonal(diag, sub);
    }
    if (es.info() != Eigen::Success) throw ConvergenceFailure("solve_stationary: eigensolver failed");

    EigenSolution sol{es.eigenvalues().head(k), {}, grid};
    const double inv_sqrt_dx = 1.0 / std::sqrt(grid.dx());
    sol.states.reserve(k);
    for (int j = 0; j < k; ++j) {
        Eigen::VectorXd col = es.eigenvectors().col(j) * inv_sqrt_dx;
        // fix sign: make the largest-magnitude component positive
        int imax;
        col.cwiseAbs().maxCoeff(&imax);
        if (col[imax] < 0.0) col = -col;
        sol.states.emplace_back(grid, col.cast<std::complex<double>>());
    }
    return sol;
}

}  // namespace

EigenSolution solve_stationary(const Eigen::VectorXd& v, const Grid& grid, double mass, double hbar,
                               int k, const SolveOptions& opt) {
    if (v.size() != grid.size()) throw GridMismatch("solve_stationary: potential size mismatch");
    if (k < 1 || k > grid.size() / 4)
        throw Error("solve_stationary: k must be in [1, n_points/4]");

    EigenSolution sol = solve_once(v, grid, mass, hbar, k, opt.method);

    if (opt.check_refinement) {
        // re-solve on the half-resolution subgrid; agreement there certifies
        // the full grid without interpolating the potential
        const Grid sub(grid.x_min(), grid.x_max(), grid.size() / 2);
        Eigen::VectorXd vs(sub.size());
        for (int i = 0; i < sub.size(); ++i) vs[i] = v[2 * i];
        const int k_sub = std::min(k, sub.size() / 4);
        const EigenSolution sub_sol = solve_once(vs, sub, mass, hbar, k_sub, opt.method);
        const double scale = std::max(sol.energies.cwiseAbs().maxCoeff(), 1e-300);
        for (int j = 0; j < k_sub; ++j)
            if (std::abs(sol.energies[j] - sub_sol.energies[j]) > 1e-6 * scale)
                throw GridTooCoarse("solve_stationary: level shifts above 1e-6 under refinement");
    }
    return sol;
}

std::vector<WellLabel> classify_wells(const EigenSolution& sol, double barrier_x) {
    if (sol.states.empty()) throw Error("classify_wells: empty solution");
    std::vector<WellLabel> labels;
    labels.reserve(sol.states.size());
    const double dx = sol.grid.dx();
    for (size_t j = 0; j < sol.states.size(); ++j) {
        double left = 0.0;
        const auto& a = sol.states[j].amplitudes;
        for (int i = 0; i < sol.grid.size(); ++i)
            if (sol.grid.x()[i] < barrier_x) left += std::norm(a[i]) * dx;
        if (left > 0.45 && left < 0.55)
            throw Ambiguous("classify_wells: state " + std::to_string(j) +
                            " is delocalized across the barrier");
        const WellSide side = left > 0.5 ? WellSide::Left : WellSide::Right;
        labels.push_back({side, side == WellSide::Left ? left : 1.0 - left, static_cast<int>(j)});
    }
    return labels;
}

int lowest_on_side(const std::vector<WellLabel>& labels, WellSide side) {
    for (const auto& l : labels)
        if (l.side == side) return l.index_in_spectrum;
    return -1;
}

Wavefunction harmonic_eigenstate(int n, double omega, double center, double mass, double hbar,
                                 const Grid& grid) {
    const double a0 = std::sqrt(hbar / (mass * omega));
    const double extent = std::sqrt(2.0 * n + 1.0) * a0;
    if (extent > 0.25 * grid.span())
        throw GridTooSmall("harmonic_eigenstate: state extent exceeds grid span / 4");
    Eigen::VectorXcd amp(grid.size());
    for (int i = 0; i < grid.size(); ++i) {
        const double u = (grid.x()[i] - center) / a0;
        // recurrence for the normalized Hermite functions, Gaussian folded in
        double h_prev = 0.0, h = std::exp(-0.5 * u * u);
        for (int m = 1; m <= n; ++m) {
            const double h_next =
                std::sqrt(2.0 / m) * u * h - std::sqrt((m - 1.0) / m) * h_prev;
            h_prev = h;
            h = h_next;
        }
        amp[i] = h;
    }
    return normalize(Wavefunction(grid, amp));
}

}  // namespace biasflip
