#ifndef BIASFLIP_PROTOCOLS_HPP
#define BIASFLIP_PROTOCOLS_HPP

#include <array>

#include <Eigen/Dense>

#include "biasflip/potentials.hpp"
#include "biasflip/wavefunction.hpp"

namespace biasflip {

enum class ProtocolKind { Sudden, Polynomial, Faquad, PolynomialCompensated };

const char* protocol_name(ProtocolKind k);

/// Control-parameter schedule lambda(t). Polynomial kinds hold quintic
/// coefficients in s = t/t_final; Faquad is the linear connection.
struct ProtocolSpec {
    ProtocolKind kind;
    double lambda_start;
    double lambda_end;
    double t_final;                     // s; 0 for Sudden
    double faquad_c = 0.0;              // adiabaticity constant, Faquad only
    std::array<double, 6> poly_coeffs{};  // c0..c5 in s = t/t_final
};

ProtocolSpec build_polynomial(double lambda_start, double lambda_end, double t_final);
ProtocolSpec build_polynomial_compensated(double lambda_start, double lambda_end, double t_final);
ProtocolSpec build_faquad(double lambda_start, double lambda_end, double t_final);
ProtocolSpec build_sudden(double lambda_start, double lambda_end);

double lambda_at(const ProtocolSpec& spec, double t);
double lambda_dot_at(const ProtocolSpec& spec, double t);
double lambda_ddot_at(const ProtocolSpec& spec, double t);

/// x0(lambda) for one well, with numerically evaluated first and second
/// derivatives (centered differences, Richardson-extrapolated once).
class MinimaCurve {
public:
    MinimaCurve(DoubleWellParams params, WellSide side, double lambda_scale);

    double position(double lambda) const;
    double d1(double lambda) const;
    double d2(double lambda) const;

    /// Chain rule: x0_ddot = x0''(lambda) lambda_dot^2 + x0'(lambda) lambda_ddot.
    double acceleration(double lambda, double lambda_dot, double lambda_ddot) const;

private:
    DoubleWellParams params_;
    WellSide side_;
    double step_;
};

struct ProtocolTrajectory {
    Eigen::VectorXd times;
    Eigen::VectorXd lambda, lambda_dot, lambda_ddot;
    Eigen::VectorXd x0, x0_dot, x0_ddot;
    Eigen::VectorXd lambda_eff;    // equals lambda for uncompensated kinds
    Eigen::VectorXd extra_slope;   // additive linear potential slope (J/m), atom compensation
    bool compensated = false;
};

/// Sample the well-minimum trajectory for the chosen side. Throws
/// ValidityViolation when the parallel-motion margin fails at the extremes.
ProtocolTrajectory minima_trajectory(const ProtocolSpec& spec, const DoubleWellParams& params,
                                     WellSide side, int n_samples);

/// Ion: folds -m x0_ddot into the linear slope (gamma_eff). Atom: attaches
/// the compensation as an explicit additive linear potential term.
ProtocolTrajectory compensate(const ProtocolTrajectory& traj, const DoubleWellParams& params);

/// Right-hand side of the short-time inequality for the compensated ion ramp.
double short_time_bound(const IonQuarticParams& params, double gamma0);

/// FAQUAD adiabaticity constant c = m |x0_dot| / sqrt(2 hbar m Omega0).
double faquad_constant(const ProtocolSpec& spec, const DoubleWellParams& params, WellSide side,
                       double omega0, double hbar);

/// U = exp(-i p x0 / hbar) exp(i m v0 x / hbar): moves the packet center by
/// +x0 and boosts it by +v0. Throws ShiftTooLarge beyond span/4.
Wavefunction displacement_unitary_apply(const Wavefunction& psi, double x0, double v0, double mass,
                                        double hbar);

}  // namespace biasflip

#endif
