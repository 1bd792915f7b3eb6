#ifndef BIASFLIP_EXPERIMENTS_HPP
#define BIASFLIP_EXPERIMENTS_HPP

#include <string>
#include <vector>

#include "biasflip/dynamics.hpp"
#include "biasflip/potentials.hpp"
#include "biasflip/protocols.hpp"
#include "biasflip/spectral.hpp"
#include "biasflip/units.hpp"

namespace biasflip {

/// A fully specified physical configuration: parameters at the initial
/// control value, the internal-unit grid, and the chosen well.
struct Scenario {
    std::string name;
    DoubleWellParams params;   // SI, control set to lambda0
    double lambda0;            // initial control value (N or m)
    WellSide well_choice = WellSide::Left;
    Grid grid;                 // internal units (a0 of the scenario)
    UnitScale scale;
    WellAnalysis analysis;     // at lambda0
    PhysicalConstants constants;

    double omega0() const { return analysis.omega_ref; }
    double period() const;  // 2 pi / Omega0, s
    bool is_ion() const { return std::holds_alternative<IonQuarticParams>(params); }
};

/// Be-9 ion in the quartic trap, windowed single-well grid around the chosen
/// well (span in units of a0). Default values: alpha = -4.7 pN/m,
/// beta = 5.2 mN/m^3, gamma0 = 86.4 zN.
Scenario make_ion_scenario(WellSide side = WellSide::Left, int n_points = 512,
                           double span_a0 = 48.0);

/// Rb-87 atom in the harmonic + lattice trap, full-domain grid spanning both
/// wells (span in lattice constants). Default values: d_l = 5.18 um,
/// omega = 2 pi x 59.4 Hz, V0/h = 1.4 kHz, delta_x0 = 200 nm.
Scenario make_atom_scenario(WellSide side = WellSide::Left, int n_points = 1024,
                            double span_dl = 4.0);

/// Custom scenario from explicit parameters (control already set to lambda0).
Scenario make_custom_scenario(const DoubleWellParams& params, WellSide side, int n_points,
                              double span_a0);

struct RunMetrics {
    double fidelity = 0.0;
    double excitation_energy = 0.0;  // J
    double sudden_fidelity_reference = 0.0;
    double ratio_R = 0.0;
    double t_final = 0.0;  // s
    ProtocolKind protocol_kind = ProtocolKind::Sudden;
    double norm_drift = 0.0;
    double initial_energy = 0.0;  // J, of the target-well configuration
};

struct RunOptions {
    double dt = 0.0;          // s; 0 selects the scenario default
    int min_steps = 1000;
    bool exact_eigenstates = true;  // else harmonic approximation at the minima
    bool record_snapshots = false;
    int store_every = 50;
};

/// Propagate the scenario under the protocol and measure fidelity and
/// excitation against the lowest same-well state at the final configuration.
RunMetrics run_protocol(const Scenario& scenario, const ProtocolSpec& spec,
                        const RunOptions& options = {});

/// As run_protocol, also returning the propagation record (densities etc).
RunMetrics run_protocol_detailed(const Scenario& scenario, const ProtocolSpec& spec,
                                 const RunOptions& options, PropagationResult* out);

/// Overlap of the initial-well lowest state with the final-configuration
/// target; no propagation.
double sudden_fidelity(const Scenario& scenario);

/// R = d / a0.
double displacement_ratio(const Scenario& scenario);

struct SweepCell {
    ProtocolKind kind;
    double t_final;
    RunMetrics metrics;
    bool ok = false;
    std::string error;
};

/// Full (kind, t_f) table. Cells run independently; parallelism capped by
/// the BIASFLIP_THREADS environment variable.
std::vector<SweepCell> sweep_tf(const Scenario& scenario, const std::vector<ProtocolKind>& kinds,
                                const std::vector<double>& tf_grid, const RunOptions& options = {});

struct HardwareEstimate {
    double a_max_lower_bound;  // m/s^2, 2 d / t_f^2
    double a_peak;             // m/s^2, actual quintic peak
    double gradient_T_per_m;   // magnetic gradient from the actual peak
    double dipole_power_over_waist_cubed;  // W/m^3
    double polarizability;     // m^2 s
};

/// Magnetic-gradient and dipole-beam requirements for the atom scenario.
HardwareEstimate hardware_feasibility(const Scenario& scenario, double t_f);

/// Potential samples on the scenario grid, internal energy units, at the
/// given control value; optional extra linear slope (SI J/m).
Eigen::VectorXd scenario_potential(const Scenario& scenario, double lambda,
                                   double extra_slope_si = 0.0);

/// Lowest same-well eigenstate and its energy (internal units) at a control
/// value. exact = local diagonalization; else harmonic state at the minimum.
std::pair<Wavefunction, double> well_ground_state(const Scenario& scenario, double lambda,
                                                  bool exact = true);

/// Eigensolution of the scenario potential at a control value (internal units).
EigenSolution scenario_spectrum(const Scenario& scenario, double lambda, int k);

}  // namespace biasflip

#endif
