#include "biasflip/grid.hpp"

#include <cmath>

#include "biasflip/errors.hpp"

namespace biasflip {

namespace {
bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }
}

Grid::Grid(double x_min, double x_max, int n_points)
    : x_min_(x_min), x_max_(x_max), n_(n_points) {
    if (!(x_max > x_min)) throw Error("Grid: x_max must exceed x_min");
    if (n_points < 2 || !is_power_of_two(n_points))
        throw Error("Grid: n_points must be a power of two >= 2");
    dx_ = (x_max - x_min) / n_points;
    dk_ = 2.0 * M_PI / (n_points * dx_);
    x_.resize(n_);
    k_.resize(n_);
    for (int i = 0; i < n_; ++i) {
        x_[i] = x_min + i * dx_;
        const int m = (i <= n_ / 2 - 1) ? i : i - n_;
        k_[i] = m * dk_;
    }
    // Nyquist index n/2 carries -n/2*dk by the convention above; either
    // sign squares to the same kinetic factor.
}

}  // namespace biasflip
