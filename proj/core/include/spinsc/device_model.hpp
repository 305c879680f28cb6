#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "spinsc/gate_kind.hpp"

namespace spinsc {

namespace phys {
inline constexpr double k_B = 1.380649e-23;        // J/K
inline constexpr double q_e = 1.602176634e-19;     // C
inline constexpr double hbar = 1.054571817e-34;    // J s
inline constexpr double mu0 = 1.25663706212e-6;    // T m/A
inline constexpr double gamma_e = 1.76085963023e11;  // rad/(s T)
inline constexpr double mu_B = 9.2740100783e-24;   // J/T
inline constexpr double pi = 3.14159265358979323846;
}  // namespace phys

struct DeviceParams {
    double e_b_kT = 52.0;            // energy barrier in units of kT
    double h_k = 16e4;               // A/m
    double m_s = 250e3;              // A/m
    double alpha = 0.007;
    double ra = 0.6e-14;             // Ohm m^2
    double temperature = 300.0;      // K
    double magnet_width = 37.8e-9;   // m
    double magnet_length = 75.7e-9;
    double magnet_thickness = 3e-9;
    double polarization = 0.8;
    double channel_length = 100e-9;
    double channel_thickness = 200e-9;
    double lead_thickness = 100e-9;
    double lead_length = 200e-9;
    // Calibration parameters. Zero means "derive": i_crit from the macrospin
    // spin-torque threshold (4 e alpha E_b / (hbar P)), n_s from M_s V / mu_B.
    double i_crit = 0.0;
    double n_s = 0.0;

    double kT() const;
    double e_b() const;         // J
    double volume() const;      // m^3
    double r_spin() const;      // RA / (W_m L_m)
    double i_crit_A() const;
    double n_s_value() const;
    // d(tau)/dt = alpha gamma mu0 H_k / (1 + alpha^2), in 1/s
    double tau_rate() const;

    // Throws ConfigError naming the first violated invariant.
    void validate() const;
};

DeviceParams load_device_params(const std::string& path);
DeviceParams parse_device_params(std::istream& in);
void save_device_params(const std::string& path, const DeviceParams& p);
void write_device_params(std::ostream& out, const DeviceParams& p);

struct DriveCondition {
    double i = 0.0;    // I_supply / I_crit
    double h = 0.0;    // H / H_k
    double t_g = 0.0;  // s
};

// Closed-form switching error rate (Butler et al. form). Requires i > 1.
double closed_form_error_rate(const DeviceParams& p, const DriveCondition& d);

// Large-overdrive (i >> 1) form, a function of the product i * t_g only.
// Used by the abstract operating-point model.
double isok_error_rate(const DeviceParams& p, double i_times_tg);
// Inverse of isok_error_rate: returns i * t_g (s) giving the target epsilon.
double isok_drive_product(const DeviceParams& p, double eps);

// energy = c * I^2 * R_spin * t_g  =>  I, then i = I / I_crit.
double supply_current_from_energy(const DeviceParams& p, double energy, double t_g, GateKind kind);
double gate_energy(const DeviceParams& p, double current, double t_g, GateKind kind);
double error_rate_from_energy_delay(const DeviceParams& p, double energy, double t_g, GateKind kind);

enum class FixedQuantity { Delay, Current };

struct OperatingPoint {
    DriveCondition drive;
    double current = 0.0;         // A
    double energy_inverter = 0.0; // J, c = 1
    double epsilon = 0.0;
    std::string note;
};

// Inverts the closed form by monotone bisection on the free quantity.
// value is t_g (s) for FixedQuantity::Delay and i (dimensionless) for Current.
OperatingPoint solve_operating_point(const DeviceParams& p, double target_eps, FixedQuantity fixed,
                                     double value);

// ---------------------------------------------------------------- Fokker-Planck
struct FpState {
    std::vector<double> theta;  // cell centres, strictly increasing in (0, pi)
    std::vector<double> rho;    // density over solid angle (per steradian / 2 pi)
    double tau = 0.0;
    // Solid-angle weights of each cell: cos(theta_-) - cos(theta_+).
    std::vector<double> weight;
    double mass() const;
};

struct FpOptions {
    int grid_size = 512;
    double dtau = 1e-3;
    std::vector<double> checkpoints;  // tau values, ascending
};

FpState fp_initial_state(const DeviceParams& p, int grid_size);
FpState fp_equilibrium_state(const DeviceParams& p, int grid_size);
std::vector<FpState> fp_evolve(const DeviceParams& p, const DriveCondition& d, const FpOptions& opt,
                               const FpState* start = nullptr);
// epsilon = integral over [0, pi/2] of rho sin(theta) d(theta). With jacobian = false
// the sin(theta) factor is dropped (and the result renormalised over [0, pi]).
double fp_error_rate(const FpState& s, bool jacobian = true);
// Convenience: evolve from the initial state to drive.t_g and return epsilon.
double fp_error_rate_at(const DeviceParams& p, const DriveCondition& d, int grid_size = 512,
                        double dtau = 1e-3);

// ---------------------------------------------------------------- stochastic LLG
struct LlgOptions {
    std::size_t trials = 10000;
    std::uint64_t seed = 1;
    double steps_per_tg = 2000.0;
    double min_dt = 1e-15;           // s
    bool thermal = true;             // false: noiseless dynamics
    bool random_initial = true;      // false: start at theta0
    double theta0 = 1e-3;            // rad, used when random_initial is false
};

struct LlgResult {
    double epsilon = 0.0;
    std::size_t failures = 0;
    std::size_t trials = 0;
    double std_error = 0.0;
    double ci_low = 0.0, ci_high = 0.0;  // Wilson 95%
    double max_norm_drift = 0.0;
};

LlgResult llg_monte_carlo(const DeviceParams& p, const DriveCondition& d, const LlgOptions& opt);

// ---------------------------------------------------------------- contours
struct ContourPoint {
    double energy;
    double delay;
    double epsilon;
};
// Inverter epsilon on a log grid of (energy, delay); points with i <= 1 get epsilon = 1.
std::vector<ContourPoint> energy_delay_grid(const DeviceParams& p, double e_min, double e_max,
                                            int n_e, double t_min, double t_max, int n_t);

struct WilsonInterval {
    double low, high;
};
WilsonInterval wilson_interval(std::size_t successes, std::size_t n, double z = 1.959963984540054);

}  // namespace spinsc
