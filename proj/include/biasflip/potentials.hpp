#ifndef BIASFLIP_POTENTIALS_HPP
#define BIASFLIP_POTENTIALS_HPP

#include <array>
#include <utility>
#include <variant>

#include <Eigen/Dense>

namespace biasflip {

/// V(x) = beta x^4 + alpha x^2 + gamma x, alpha < 0, beta > 0.
struct IonQuarticParams {
    double alpha;  // N/m, < 0
    double beta;   // N/m^3, > 0
    double gamma;  // N, the time-varying slope
    double mass;   // kg

    IonQuarticParams with_control(double g) const { return {alpha, beta, g, mass}; }
};

/// V(x) = (1/2) m omega^2 x^2 + v0 cos^2(pi (x - delta_x) / d_lattice).
struct AtomLatticeParams {
    double omega;      // rad/s
    double v0;         // J
    double d_lattice;  // m
    double delta_x;    // m, the time-varying displacement
    double mass;       // kg

    AtomLatticeParams with_control(double dx) const { return {omega, v0, d_lattice, dx, mass}; }
};

using DoubleWellParams = std::variant<IonQuarticParams, AtomLatticeParams>;

enum class WellSide { Left, Right };

/// Coefficients and intermediates of the depressed-cubic extremum equation
/// x^3 + a x^2 + b x + c = 0 in Numerical Recipes normalization.
struct CubicIntermediates {
    double a_coef, b_coef, c_coef;
    double q_val, r_val;
    double theta;  // arccos(r/sqrt(q^3)), in [0, pi]; valid only when r^2 < q^3
};

struct WellAnalysis {
    double x_minus, x_plus;   // well minima, x_plus > x_minus (m)
    double barrier_x;         // remaining stationary point (m)
    double distance;          // D = x_plus - x_minus (m)
    double bias;              // delta = V(x_plus) - V(x_minus) (J)
    double omega_minus, omega_plus;  // effective frequencies (rad/s)
    double omega_ref;         // Omega0, common reference frequency (rad/s)
    double displacement;      // d, travel of each minimum over the full inversion (m)
    double ratio;             // R = d / a0
};

enum class ValidityStatus { Ok, Warn, Fail };

struct ValidityReport {
    double two_minima_bound;    // control value at which the double well degenerates
    double parallel_bound;      // control value at which the quadratic term matches the linear one
    double two_minima_margin;   // actual / bound
    double parallel_margin;     // actual / bound
    double freq_variation;      // max range of either effective frequency over the sweep (rad/s)
    double distance_variation;  // max range of D over the sweep (m)
    bool parallel_ok;           // parallel_margin < 0.1
    ValidityStatus status;
};

// --- evaluation --------------------------------------------------------

double potential_at(const IonQuarticParams& p, double x);
double potential_at(const AtomLatticeParams& p, double x);
double potential_derivative_at(const IonQuarticParams& p, double x);
double potential_derivative_at(const AtomLatticeParams& p, double x);
double potential_second_derivative_at(const IonQuarticParams& p, double x);
double potential_second_derivative_at(const AtomLatticeParams& p, double x);

Eigen::VectorXd evaluate_potential(const IonQuarticParams& p, const Eigen::VectorXd& x);
Eigen::VectorXd evaluate_potential(const AtomLatticeParams& p, const Eigen::VectorXd& x);
Eigen::VectorXd evaluate_potential(const DoubleWellParams& p, const Eigen::VectorXd& x);

double potential_at(const DoubleWellParams& p, double x);
double potential_derivative_at(const DoubleWellParams& p, double x);
double potential_second_derivative_at(const DoubleWellParams& p, double x);
double particle_mass(const DoubleWellParams& p);
double control_value(const DoubleWellParams& p);
DoubleWellParams with_control(const DoubleWellParams& p, double lambda);

// --- minima analytics ---------------------------------------------------

/// Trigonometric solution of the quartic's extremum cubic. Throws NotDoubleWell
/// when the two-minima condition fails (strictly: degenerate input rejected).
std::pair<WellAnalysis, CubicIntermediates> ion_minima(const IonQuarticParams& p, double hbar);

/// Second-order-in-gamma approximations of the minima. Valid in the
/// parallel-motion regime; no regime check here (see validity_report).
std::pair<double, double> ion_minima_approx(const IonQuarticParams& p);

/// Exact minima of the lattice potential: closed-form seed refined by root
/// finding on the exact derivative. Returns the two central-well cubics.
std::pair<WellAnalysis, std::array<CubicIntermediates, 2>> atom_minima(const AtomLatticeParams& p,
                                                                       double hbar);

struct AtomExpansion {
    double a;  // m, symmetric minimum position at delta_x = 0
    double b;  // dimensionless, linear response of both minima
    double c;  // 1/m, quadratic (antisymmetric) response
    double f;  // rad/s, Omega0
    double g;  // rad/(s m), linear frequency response
};

/// Coefficients of x0_pm ~ +-a + b dx +- c dx^2 and w0_pm ~ f -+ g dx,
/// extracted numerically from the exact minima at delta_x in {0, +-h, +-2h}.
AtomExpansion atom_minima_expansion(const AtomLatticeParams& p);

/// Regime checks at |control| <= lambda_max; margins below 0.1 map to Ok,
/// 0.1..0.5 to Warn, above to Fail.
ValidityReport validity_report(const DoubleWellParams& p, double lambda_max);

/// Unified minima for any params; used by protocol trajectory generation.
double well_minimum(const DoubleWellParams& p, WellSide side);
double barrier_position(const DoubleWellParams& p);

}  // namespace biasflip

#endif
