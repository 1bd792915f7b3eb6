#ifndef BIASFLIP_UNITS_HPP
#define BIASFLIP_UNITS_HPP

#include <cmath>

namespace biasflip {

/// CODATA 2018 values. Immutable after construction.
struct PhysicalConstants {
    double hbar = 1.054571817e-34;              // J s
    double bohr_magneton = 9.2740100783e-24;    // J/T
    double atomic_mass_unit = 1.66053906660e-27;  // kg

    double planck() const { return 2.0 * M_PI * hbar; }
};

/// Scenario-scaled units with hbar = m = Omega0 = 1 internally.
/// length = a0 = sqrt(hbar/(m Omega0)), time = 1/Omega0, energy = hbar Omega0.
struct UnitScale {
    double length_m = 1.0;
    double time_s = 1.0;
    double energy_J = 1.0;
    double mass_kg = 1.0;

    static UnitScale oscillator(double mass_kg, double omega0, double hbar) {
        UnitScale u;
        u.length_m = std::sqrt(hbar / (mass_kg * omega0));
        u.time_s = 1.0 / omega0;
        u.energy_J = hbar * omega0;
        u.mass_kg = mass_kg;
        return u;
    }

    double length_to_internal(double m) const { return m / length_m; }
    double length_to_si(double v) const { return v * length_m; }
    double time_to_internal(double s) const { return s / time_s; }
    double time_to_si(double v) const { return v * time_s; }
    double energy_to_internal(double j) const { return j / energy_J; }
    double energy_to_si(double v) const { return v * energy_J; }
    // slope of a linear potential term, J/m
    double slope_to_internal(double j_per_m) const { return j_per_m * length_m / energy_J; }
    double accel_to_internal(double m_per_s2) const { return m_per_s2 * time_s * time_s / length_m; }
};

}  // namespace biasflip

#endif
