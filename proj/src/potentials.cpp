#include "biasflip/potentials.hpp"

#include <algorithm>
#include <cmath>

#include "biasflip/errors.hpp"

namespace biasflip {

namespace {

// Brent-style bisection/secant hybrid on a bracketed root of f.
template <class F>
double find_root(F&& f, double lo, double hi, double tol) {
    double flo = f(lo), fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if (flo * fhi > 0.0) throw Error("find_root: endpoints do not bracket a root");
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        // secant candidate, clamped to the bracket
        double sec = (hi * flo - lo * fhi) / (flo - fhi);
        double x = (sec > lo && sec < hi) ? sec : mid;
        double fx = f(x);
        if (fx == 0.0 || hi - lo < tol) return x;
        if (flo * fx < 0.0) { hi = x; fhi = fx; }
        else { lo = x; flo = fx; }
    }
    return 0.5 * (lo + hi);
}

// Golden-section maximization on [lo, hi].
template <class F>
double find_maximum(F&& f, double lo, double hi, double tol) {
    const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
    double a = lo, b = hi;
    double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) { a = x1; x1 = x2; f1 = f2; x2 = a + gr * (b - a); f2 = f(x2); }
        else { b = x2; x2 = x1; f2 = f1; x1 = b - gr * (b - a); f1 = f(x1); }
    }
    return 0.5 * (a + b);
}

// Numerical Recipes trigonometric roots of x^3 + a x^2 + b x + c with three
// real roots, ascending.
std::array<double, 3> cubic_roots(const CubicIntermediates& ci) {
    const double sq = std::sqrt(ci.q_val);
    std::array<double, 3> r;
    for (int k = 0; k < 3; ++k)
        r[k] = -2.0 * sq * std::cos((ci.theta + 2.0 * M_PI * k) / 3.0) - ci.a_coef / 3.0;
    std::sort(r.begin(), r.end());
    return r;
}

CubicIntermediates make_cubic(double a, double b, double c) {
    CubicIntermediates ci;
    ci.a_coef = a;
    ci.b_coef = b;
    ci.c_coef = c;
    ci.q_val = (a * a - 3.0 * b) / 9.0;
    ci.r_val = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    if (ci.q_val > 0.0 && ci.r_val * ci.r_val < ci.q_val * ci.q_val * ci.q_val)
        ci.theta = std::acos(ci.r_val / std::sqrt(ci.q_val * ci.q_val * ci.q_val));
    else
        ci.theta = std::numeric_limits<double>::quiet_NaN();
    return ci;
}

bool two_minima(const CubicIntermediates& ci) {
    return ci.q_val > 0.0 && ci.r_val * ci.r_val < ci.q_val * ci.q_val * ci.q_val;
}

double atom_left_minimum(const AtomLatticeParams& p);
double atom_right_minimum(const AtomLatticeParams& p);

}  // namespace

// --- evaluation ----------------------------------------------------------

double potential_at(const IonQuarticParams& p, double x) {
    return p.beta * x * x * x * x + p.alpha * x * x + p.gamma * x;
}

double potential_at(const AtomLatticeParams& p, double x) {
    const double c = std::cos(M_PI * (x - p.delta_x) / p.d_lattice);
    return 0.5 * p.mass * p.omega * p.omega * x * x + p.v0 * c * c;
}

double potential_derivative_at(const IonQuarticParams& p, double x) {
    return 4.0 * p.beta * x * x * x + 2.0 * p.alpha * x + p.gamma;
}

double potential_derivative_at(const AtomLatticeParams& p, double x) {
    return p.mass * p.omega * p.omega * x -
           p.v0 * M_PI / p.d_lattice * std::sin(2.0 * M_PI * (x - p.delta_x) / p.d_lattice);
}

double potential_second_derivative_at(const IonQuarticParams& p, double x) {
    return 12.0 * p.beta * x * x + 2.0 * p.alpha;
}

double potential_second_derivative_at(const AtomLatticeParams& p, double x) {
    return p.mass * p.omega * p.omega -
           2.0 * p.v0 * M_PI * M_PI / (p.d_lattice * p.d_lattice) *
               std::cos(2.0 * M_PI * (x - p.delta_x) / p.d_lattice);
}

template <class P>
static Eigen::VectorXd evaluate_impl(const P& p, const Eigen::VectorXd& x) {
    Eigen::VectorXd v(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) v[i] = potential_at(p, x[i]);
    return v;
}

Eigen::VectorXd evaluate_potential(const IonQuarticParams& p, const Eigen::VectorXd& x) {
    return evaluate_impl(p, x);
}
Eigen::VectorXd evaluate_potential(const AtomLatticeParams& p, const Eigen::VectorXd& x) {
    return evaluate_impl(p, x);
}
Eigen::VectorXd evaluate_potential(const DoubleWellParams& p, const Eigen::VectorXd& x) {
    return std::visit([&](const auto& q) { return evaluate_impl(q, x); }, p);
}

double potential_at(const DoubleWellParams& p, double x) {
    return std::visit([&](const auto& q) { return potential_at(q, x); }, p);
}
double potential_derivative_at(const DoubleWellParams& p, double x) {
    return std::visit([&](const auto& q) { return potential_derivative_at(q, x); }, p);
}
double potential_second_derivative_at(const DoubleWellParams& p, double x) {
    return std::visit([&](const auto& q) { return potential_second_derivative_at(q, x); }, p);
}
double particle_mass(const DoubleWellParams& p) {
    return std::visit([](const auto& q) { return q.mass; }, p);
}
double control_value(const DoubleWellParams& p) {
    if (const auto* ion = std::get_if<IonQuarticParams>(&p)) return ion->gamma;
    return std::get<AtomLatticeParams>(p).delta_x;
}
DoubleWellParams with_control(const DoubleWellParams& p, double lambda) {
    if (const auto* ion = std::get_if<IonQuarticParams>(&p)) return ion->with_control(lambda);
    return std::get<AtomLatticeParams>(p).with_control(lambda);
}

// --- ion analytics --------------------------------------------------------

std::pair<WellAnalysis, CubicIntermediates> ion_minima(const IonQuarticParams& p, double hbar) {
    // 4 beta x^3 + 2 alpha x + gamma = 0, normalized to x^3 + B x + C = 0
    const CubicIntermediates ci =
        make_cubic(0.0, p.alpha / (2.0 * p.beta), p.gamma / (4.0 * p.beta));
    if (!two_minima(ci))
        throw NotDoubleWell("ion_minima: |gamma| at or beyond the two-minima bound");

    const auto roots = cubic_roots(ci);
    WellAnalysis w{};
    w.x_minus = roots[0];
    w.barrier_x = roots[1];
    w.x_plus = roots[2];
    w.distance = w.x_plus - w.x_minus;
    w.bias = potential_at(p, w.x_plus) - potential_at(p, w.x_minus);
    w.omega_minus = std::sqrt(potential_second_derivative_at(p, w.x_minus) / p.mass);
    w.omega_plus = std::sqrt(potential_second_derivative_at(p, w.x_plus) / p.mass);
    w.omega_ref = 2.0 * std::sqrt(-p.alpha / p.mass);

    // travel of each minimum over the full inversion gamma -> -gamma
    const auto fwd = cubic_roots(ci);
    const auto rev =
        cubic_roots(make_cubic(0.0, p.alpha / (2.0 * p.beta), -p.gamma / (4.0 * p.beta)));
    w.displacement = std::abs(rev[0] - fwd[0]);
    const double a0 = std::sqrt(hbar / (p.mass * w.omega_ref));
    w.ratio = w.displacement / a0;
    return {w, ci};
}

std::pair<double, double> ion_minima_approx(const IonQuarticParams& p) {
    const double lead = std::sqrt(-p.alpha / p.beta) / std::sqrt(2.0);
    const double lin = p.gamma / (4.0 * p.alpha);
    const double quad = 3.0 * p.gamma * p.gamma * std::sqrt(-p.alpha * p.beta) /
                        (16.0 * std::sqrt(2.0) * p.alpha * p.alpha * p.alpha);
    return {-lead + lin - quad, lead + lin + quad};
}

// --- atom analytics --------------------------------------------------------

namespace {

double atom_left_minimum(const AtomLatticeParams& p) {
    const double lo = p.delta_x - 0.95 * p.d_lattice;
    const double hi = p.delta_x - 0.05 * p.d_lattice;
    return find_root([&](double x) { return potential_derivative_at(p, x); }, lo, hi,
                     1e-15 * p.d_lattice);
}

double atom_right_minimum(const AtomLatticeParams& p) {
    const double lo = p.delta_x + 0.05 * p.d_lattice;
    const double hi = p.delta_x + 0.95 * p.d_lattice;
    return find_root([&](double x) { return potential_derivative_at(p, x); }, lo, hi,
                     1e-15 * p.d_lattice);
}

// Closed-form cubic for the fourth-order expansion around each central well.
CubicIntermediates atom_cubic(const AtomLatticeParams& p, int sign) {
    const double dl = p.d_lattice, v0 = p.v0, m = p.mass, w = p.omega;
    const double q = (2.0 * dl * dl * M_PI * M_PI * v0 + dl * dl * dl * dl * m * w * w) /
                     (4.0 * M_PI * M_PI * M_PI * M_PI * v0);
    const double apm = -1.5 * (2.0 * p.delta_x + sign * dl);
    const double arg = -3.0 * dl * (2.0 * p.delta_x + sign * dl) * m * M_PI * M_PI *
                       std::sqrt(v0) * w * w /
                       (2.0 * std::pow(2.0 * M_PI * M_PI * v0 + dl * dl * m * w * w, 1.5));
    CubicIntermediates ci{};
    ci.a_coef = apm;
    ci.q_val = q;
    ci.theta = (std::abs(arg) < 1.0) ? std::acos(arg) : std::numeric_limits<double>::quiet_NaN();
    ci.r_val = arg * std::sqrt(q * q * q);
    // b, c recovered from (a, q, r) of the NR normalization
    ci.b_coef = (apm * apm - 9.0 * q) / 3.0;
    ci.c_coef = (54.0 * ci.r_val - 2.0 * apm * apm * apm + 9.0 * apm * ci.b_coef) / 27.0;
    return ci;
}

double atom_closed_form_minimum(const AtomLatticeParams& p, int sign) {
    const CubicIntermediates ci = atom_cubic(p, sign);
    if (std::isnan(ci.theta)) throw NotDoubleWell("atom_minima: expansion cubic degenerate");
    return -2.0 * std::sqrt(ci.q_val) * std::cos((ci.theta - 2.0 * M_PI) / 3.0) - ci.a_coef / 3.0;
}

}  // namespace

std::pair<WellAnalysis, std::array<CubicIntermediates, 2>> atom_minima(const AtomLatticeParams& p,
                                                                       double hbar) {
    const std::array<CubicIntermediates, 2> cubics = {atom_cubic(p, -1), atom_cubic(p, +1)};
    if (std::isnan(cubics[0].theta) || std::isnan(cubics[1].theta))
        throw NotDoubleWell("atom_minima: no double well at this displacement");

    // Closed form cross-checked against the exact derivative; exact wins.
    WellAnalysis w{};
    w.x_minus = atom_left_minimum(p);
    w.x_plus = atom_right_minimum(p);
    if (!(w.x_minus < p.delta_x && p.delta_x < w.x_plus))
        throw NotDoubleWell("atom_minima: central wells not separated");
    w.barrier_x = find_maximum([&](double x) { return potential_at(p, x); }, w.x_minus, w.x_plus,
                               1e-14 * p.d_lattice);
    w.distance = w.x_plus - w.x_minus;
    w.bias = potential_at(p, w.x_plus) - potential_at(p, w.x_minus);
    w.omega_minus = std::sqrt(potential_second_derivative_at(p, w.x_minus) / p.mass);
    w.omega_plus = std::sqrt(potential_second_derivative_at(p, w.x_plus) / p.mass);

    const AtomLatticeParams sym = p.with_control(0.0);
    w.omega_ref = std::sqrt(potential_second_derivative_at(sym, atom_left_minimum(sym)) / p.mass);

    const AtomLatticeParams rev = p.with_control(-p.delta_x);
    w.displacement = std::abs(atom_left_minimum(rev) - w.x_minus);
    const double a0 = std::sqrt(hbar / (p.mass * w.omega_ref));
    w.ratio = w.displacement / a0;
    return {w, cubics};
}

AtomExpansion atom_minima_expansion(const AtomLatticeParams& p) {
    const double h = std::max(std::abs(p.delta_x) * 0.5, 1e-4 * p.d_lattice);
    auto xp = [&](double dx) { return atom_right_minimum(p.with_control(dx)); };
    auto wp = [&](double dx) {
        const AtomLatticeParams q = p.with_control(dx);
        return std::sqrt(potential_second_derivative_at(q, atom_right_minimum(q)) / p.mass);
    };
    AtomExpansion e{};
    e.a = xp(0.0);
    // five-point least-squares fit of a quadratic through {0, +-h, +-2h}
    const double x1 = xp(h), xm1 = xp(-h), x2 = xp(2.0 * h), xm2 = xp(-2.0 * h);
    e.b = (8.0 * (x1 - xm1) - (x2 - xm2)) / (12.0 * h);
    e.c = (16.0 * (x1 + xm1) - (x2 + xm2) - 30.0 * e.a) / (24.0 * h * h);
    e.f = wp(0.0);
    e.g = -(8.0 * (wp(h) - wp(-h)) - (wp(2.0 * h) - wp(-2.0 * h))) / (12.0 * h);
    return e;
}

// --- validity --------------------------------------------------------------

namespace {

ValidityStatus margin_status(double m) {
    if (m < 0.1) return ValidityStatus::Ok;
    if (m < 0.5) return ValidityStatus::Warn;
    return ValidityStatus::Fail;
}

}  // namespace

ValidityReport validity_report(const DoubleWellParams& p, double lambda_max) {
    ValidityReport rep{};
    const double lam = std::abs(lambda_max);
    const int n_sweep = 201;

    if (const auto* ion = std::get_if<IonQuarticParams>(&p)) {
        const double scale = std::sqrt(-ion->alpha * ion->alpha * ion->alpha / ion->beta);
        rep.two_minima_bound = std::pow(2.0 / 3.0, 1.5) * scale;
        rep.parallel_bound = 4.0 * std::sqrt(2.0) / 3.0 * scale;
        rep.two_minima_margin = lam / rep.two_minima_bound;
        rep.parallel_margin = lam / rep.parallel_bound;
    } else {
        const auto& atom = std::get<AtomLatticeParams>(p);
        const AtomExpansion e = atom_minima_expansion(atom);
        rep.parallel_bound = std::abs(e.b / e.c);
        rep.parallel_margin = lam * std::abs(e.c / e.b);
        // two-minima margin: |cos theta| of the expansion cubic at the sweep
        // extreme; linearized bound in the control
        const auto ci = atom_cubic(atom.with_control(lam), +1);
        const double cosine = std::abs(ci.r_val) / std::sqrt(ci.q_val * ci.q_val * ci.q_val);
        rep.two_minima_margin = cosine;
        rep.two_minima_bound = (cosine > 0.0) ? lam / cosine : std::numeric_limits<double>::infinity();
    }

    // frequency and distance variation from the exact minima over the sweep
    double wmin_lo = 1e300, wmin_hi = -1e300, wplus_lo = 1e300, wplus_hi = -1e300;
    double d_lo = 1e300, d_hi = -1e300;
    bool swept = false;
    for (int i = 0; i < n_sweep; ++i) {
        const double lambda = -lam + 2.0 * lam * i / (n_sweep - 1);
        const DoubleWellParams q = with_control(p, lambda);
        try {
            const double xm = well_minimum(q, WellSide::Left);
            const double xp = well_minimum(q, WellSide::Right);
            const double wm = std::sqrt(potential_second_derivative_at(q, xm) / particle_mass(q));
            const double wpp = std::sqrt(potential_second_derivative_at(q, xp) / particle_mass(q));
            wmin_lo = std::min(wmin_lo, wm); wmin_hi = std::max(wmin_hi, wm);
            wplus_lo = std::min(wplus_lo, wpp); wplus_hi = std::max(wplus_hi, wpp);
            d_lo = std::min(d_lo, xp - xm); d_hi = std::max(d_hi, xp - xm);
            swept = true;
        } catch (const NotDoubleWell&) {
            rep.two_minima_margin = std::max(rep.two_minima_margin, 1.0);
        }
    }
    rep.freq_variation = swept ? std::max(wmin_hi - wmin_lo, wplus_hi - wplus_lo) : 0.0;
    rep.distance_variation = swept ? d_hi - d_lo : 0.0;

    rep.parallel_ok = rep.parallel_margin < 0.1;
    rep.status = margin_status(std::max(rep.parallel_margin, rep.two_minima_margin));
    return rep;
}

double well_minimum(const DoubleWellParams& p, WellSide side) {
    if (const auto* ion = std::get_if<IonQuarticParams>(&p)) {
        const CubicIntermediates ci =
            make_cubic(0.0, ion->alpha / (2.0 * ion->beta), ion->gamma / (4.0 * ion->beta));
        if (!two_minima(ci)) throw NotDoubleWell("well_minimum: not a double well");
        const auto roots = cubic_roots(ci);
        return side == WellSide::Left ? roots[0] : roots[2];
    }
    const auto& atom = std::get<AtomLatticeParams>(p);
    return side == WellSide::Left ? atom_left_minimum(atom) : atom_right_minimum(atom);
}

double barrier_position(const DoubleWellParams& p) {
    if (const auto* ion = std::get_if<IonQuarticParams>(&p)) {
        const CubicIntermediates ci =
            make_cubic(0.0, ion->alpha / (2.0 * ion->beta), ion->gamma / (4.0 * ion->beta));
        if (!two_minima(ci)) throw NotDoubleWell("barrier_position: not a double well");
        return cubic_roots(ci)[1];
    }
    const auto& atom = std::get<AtomLatticeParams>(p);
    const double xm = atom_left_minimum(atom), xp = atom_right_minimum(atom);
    return find_maximum([&](double x) { return potential_at(atom, x); }, xm, xp,
                        1e-14 * atom.d_lattice);
}

}  // namespace biasflip
