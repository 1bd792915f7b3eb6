#include "biasflip/protocols.hpp"

#include <cmath>

#include <unsupported/Eigen/FFT>

#include "biasflip/errors.hpp"

namespace biasflip {

const char* protocol_name(ProtocolKind k) {
    switch (k) {
        case ProtocolKind::Sudden: return "sudden";
        case ProtocolKind::Polynomial: return "polynomial";
        case ProtocolKind::Faquad: return "faquad";
        case ProtocolKind::PolynomialCompensated: return "compensated";
    }
    return "?";
}

namespace {

ProtocolSpec quintic(double l0, double l1, double tf, ProtocolKind kind) {
    if (!(tf > 0.0)) throw NonPositiveDuration("build_polynomial: t_final must be positive");
    const double d = l1 - l0;
    ProtocolSpec s{kind, l0, l1, tf};
    s.poly_coeffs = {l0, 0.0, 0.0, 10.0 * d, -15.0 * d, 6.0 * d};
    return s;
}

}  // namespace

ProtocolSpec build_polynomial(double l0, double l1, double tf) {
    return quintic(l0, l1, tf, ProtocolKind::Polynomial);
}

ProtocolSpec build_polynomial_compensated(double l0, double l1, double tf) {
    return quintic(l0, l1, tf, ProtocolKind::PolynomialCompensated);
}

ProtocolSpec build_faquad(double l0, double l1, double tf) {
    if (!(tf > 0.0)) throw NonPositiveDuration("build_faquad: t_final must be positive");
    return ProtocolSpec{ProtocolKind::Faquad, l0, l1, tf};
}

ProtocolSpec build_sudden(double l0, double l1) {
    return ProtocolSpec{ProtocolKind::Sudden, l0, l1, 0.0};
}

double lambda_at(const ProtocolSpec& spec, double t) {
    switch (spec.kind) {
        case ProtocolKind::Sudden:
            return t <= 0.0 ? spec.lambda_start : spec.lambda_end;
        case ProtocolKind::Faquad:
            return spec.lambda_start + (spec.lambda_end - spec.lambda_start) * t / spec.t_final;
        default: {
            const double s = t / spec.t_final;
            double v = 0.0;
            for (int n = 5; n >= 0; --n) v = v * s + spec.poly_coeffs[n];
            return v;
        }
    }
}

double lambda_dot_at(const ProtocolSpec& spec, double t) {
    switch (spec.kind) {
        case ProtocolKind::Sudden:
            return 0.0;
        case ProtocolKind::Faquad:
            return (spec.lambda_end - spec.lambda_start) / spec.t_final;
        default: {
            const double s = t / spec.t_final;
            double v = 0.0;
            for (int n = 5; n >= 1; --n) v = v * s + n * spec.poly_coeffs[n];
            return v / spec.t_final;
        }
    }
}

double lambda_ddot_at(const ProtocolSpec& spec, double t) {
    switch (spec.kind) {
        case ProtocolKind::Sudden:
        case ProtocolKind::Faquad:
            return 0.0;
        default: {
            const double s = t / spec.t_final;
            double v = 0.0;
            for (int n = 5; n >= 2; --n) v = v * s + n * (n - 1) * spec.poly_coeffs[n];
            return v / (spec.t_final * spec.t_final);
        }
    }
}

// --- minima curve -----------------------------------------------------------

MinimaCurve::MinimaCurve(DoubleWellParams params, WellSide side, double lambda_scale)
    : params_(std::move(params)), side_(side), step_(1e-6 * std::abs(lambda_scale)) {
    if (step_ == 0.0) throw Error("MinimaCurve: lambda_scale must be nonzero");
}

double MinimaCurve::position(double lambda) const {
    return well_minimum(with_control(params_, lambda), side_);
}

double MinimaCurve::d1(double lambda) const {
    auto central = [&](double h) {
        return (position(lambda + h) - position(lambda - h)) / (2.0 * h);
    };
    const double d_h = central(step_), d_2h = central(2.0 * step_);
    return (4.0 * d_h - d_2h) / 3.0;  // one Richardson pass
}

double MinimaCurve::d2(double lambda) const {
    auto central = [&](double h) {
        return (position(lambda + h) - 2.0 * position(lambda) + position(lambda - h)) / (h * h);
    };
    // larger step: second differences of a root-finder output are noisy
    const double h = step_ * 5e4;
    const double d_h = central(h), d_2h = central(2.0 * h);
    return (4.0 * d_h - d_2h) / 3.0;
}

double MinimaCurve::acceleration(double lambda, double lambda_dot, double lambda_ddot) const {
    return d2(lambda) * lambda_dot * lambda_dot + d1(lambda) * lambda_ddot;
}

// --- trajectories -----------------------------------------------------------

ProtocolTrajectory minima_trajectory(const ProtocolSpec& spec, const DoubleWellParams& params,
                                     WellSide side, int n_samples) {
    if (n_samples < 2) throw Error("minima_trajectory: need at least 2 samples");
    for (double lam : {spec.lambda_start, spec.lambda_end}) {
        const ValidityReport rep = validity_report(params, std::abs(lam));
        if (rep.status == ValidityStatus::Fail)
            throw ValidityViolation("minima_trajectory: parallel-motion margin fails at lambda extreme");
    }

    const double scale = std::max(std::abs(spec.lambda_start), std::abs(spec.lambda_end));
    const MinimaCurve curve(params, side, scale > 0.0 ? scale : 1.0);

    ProtocolTrajectory tr;
    const int n = n_samples;
    tr.times.resize(n);
    tr.lambda.resize(n); tr.lambda_dot.resize(n); tr.lambda_ddot.resize(n);
    tr.x0.resize(n); tr.x0_dot.resize(n); tr.x0_ddot.resize(n);
    for (int i = 0; i < n; ++i) {
        const double t = spec.t_final * i / (n - 1);
        tr.times[i] = t;
        tr.lambda[i] = lambda_at(spec, t);
        tr.lambda_dot[i] = lambda_dot_at(spec, t);
        tr.lambda_ddot[i] = lambda_ddot_at(spec, t);
        tr.x0[i] = curve.position(tr.lambda[i]);
        const double d1 = curve.d1(tr.lambda[i]);
        const double d2 = curve.d2(tr.lambda[i]);
        tr.x0_dot[i] = d1 * tr.lambda_dot[i];
        tr.x0_ddot[i] = d2 * tr.lambda_dot[i] * tr.lambda_dot[i] + d1 * tr.lambda_ddot[i];
    }
    tr.lambda_eff = tr.lambda;
    tr.extra_slope = Eigen::VectorXd::Zero(n);
    return tr;
}

ProtocolTrajectory compensate(const ProtocolTrajectory& traj, const DoubleWellParams& params) {
    if (traj.x0_ddot.size() == 0) throw Error("compensate: trajectory lacks x0_ddot");
    ProtocolTrajectory out = traj;
    const double m = particle_mass(params);
    if (std::holds_alternative<IonQuarticParams>(params)) {
        out.lambda_eff = traj.lambda - m * traj.x0_ddot;
    } else {
        out.extra_slope = -m * traj.x0_ddot;
    }
    out.compensated = true;
    return out;
}

double short_time_bound(const IonQuarticParams& p, double gamma0) {
    const double inner = 3.0 * p.mass * gamma0 / (4.0 * std::sqrt(2.0)) *
                         std::sqrt(-p.beta / std::pow(p.alpha, 5));
    return std::sqrt(inner);
}

double faquad_constant(const ProtocolSpec& spec, const DoubleWellParams& params, WellSide side,
                       double omega0, double hbar) {
    const double scale = std::max(std::abs(spec.lambda_start), std::abs(spec.lambda_end));
    const MinimaCurve curve(params, side, scale > 0.0 ? scale : 1.0);
    const double x0_start = curve.position(spec.lambda_start);
    const double x0_end = curve.position(spec.lambda_end);
    const double m = particle_mass(params);
    const double x0_dot = (x0_end - x0_start) / spec.t_final;
    return m * std::abs(x0_dot) / std::sqrt(2.0 * hbar * m * omega0);
}

Wavefunction displacement_unitary_apply(const Wavefunction& psi, double x0, double v0, double mass,
                                        double hbar) {
    if (std::abs(x0) > 0.25 * psi.grid.span())
        throw ShiftTooLarge("displacement_unitary_apply: |x0| exceeds grid span / 4");
    const int n = psi.grid.size();
    Wavefunction out = psi;
    // momentum boost acts first
    for (int i = 0; i < n; ++i)
        out.amplitudes[i] *= std::exp(std::complex<double>(0.0, mass * v0 * psi.grid.x()[i] / hbar));
    // coordinate shift psi(x) -> psi(x - x0) via the spectral translation phase,
    // moving the packet center from c to c + x0
    Eigen::FFT<double> fft;
    Eigen::VectorXcd spec(n);
    fft.fwd(spec, out.amplitudes);
    for (int i = 0; i < n; ++i)
        spec[i] *= std::exp(std::complex<double>(0.0, -psi.grid.k()[i] * x0));
    fft.inv(out.amplitudes, spec);
    return out;
}

}  // namespace biasflip
