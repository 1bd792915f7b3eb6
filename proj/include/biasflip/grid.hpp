#ifndef BIASFLIP_GRID_HPP
#define BIASFLIP_GRID_HPP

#include <Eigen/Dense>

namespace biasflip {

/// Uniform 1D grid, n_points a power of two. Sample points are
/// x_i = x_min + i*dx, i = 0..n-1 (periodic FFT convention, x_max excluded).
/// Momentum grid uses the standard FFT layout: k=0 first, positive
/// frequencies up to the Nyquist index, negative frequencies in the
/// upper half.
class Grid {
public:
    Grid(double x_min, double x_max, int n_points);

    int size() const { return n_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double dx() const { return dx_; }
    double dk() const { return dk_; }
    double span() const { return x_max_ - x_min_; }

    const Eigen::VectorXd& x() const { return x_; }
    const Eigen::VectorXd& k() const { return k_; }

    bool operator==(const Grid& other) const {
        return n_ == other.n_ && x_min_ == other.x_min_ && x_max_ == other.x_max_;
    }
    bool operator!=(const Grid& other) const { return !(*this == other); }

private:
    double x_min_, x_max_, dx_, dk_;
    int n_;
    Eigen::VectorXd x_, k_;
};

}  // namespace biasflip

#endif
