#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "spinsc/device_model.hpp"
#include "spinsc/netlist.hpp"

namespace spinsc {

enum class EpsMode { Abstract, Physical };

// Maps normalized (delay factor, current factor) pairs to seconds, amperes,
// joules and error rates. Factor 1/1 is the unit operating point whose error
// rate is eps_unit (10% for the ED Table 2 convention).
struct OperatingModel {
    EpsMode mode = EpsMode::Abstract;
    DeviceParams device;
    double eps_unit = 0.1;
    double unit_overdrive = 5.0;  // i at current factor 1
    double unit_delay = 0.0;      // s at delay factor 1

    // Abstract: epsilon depends on i*t_g only (iso-K form); unit_delay follows
    // from eps_unit and unit_overdrive.
    static OperatingModel abstract(const DeviceParams& p, double eps_unit, double unit_overdrive = 5.0);
    // Abstract with the unit delay held fixed; the unit current follows from eps_unit.
    // Sweeping eps_unit this way compares architectures at equal decision delay.
    static OperatingModel abstract_at_delay(const DeviceParams& p, double eps_unit, double unit_delay);
    // Physical: closed-form epsilon; unit_delay solved so that eps(unit) = eps_unit.
    static OperatingModel physical(const DeviceParams& p, double eps_unit, double unit_overdrive = 5.0);

    double delay(double df) const { return df * unit_delay; }
    double current(double cf) const;  // A
    double energy(GateKind k, double df, double cf) const;
    double epsilon(double df, double cf) const;
    // Current factor that yields eps at delay factor df.
    double cf_for_epsilon(double df, double eps) const;
    // Error rate at unit energy and delay factor df (current scaled by 1/sqrt(df)).
    double epsilon_at_unit_energy(double df) const { return epsilon(df, 1.0 / std::sqrt(df)); }
};

struct DelayAssignment {
    std::vector<double> df;  // delay factor per gate (0 for constants)
    std::vector<double> cf;  // current factor per gate (0 for constants)

    static DelayAssignment uniform(const LogicNetwork& net);
    std::size_t size() const { return df.size(); }
};

struct GateAnnotation {
    double delay_s = 0, current_A = 0, energy_J = 0, epsilon = 0;
};
std::vector<GateAnnotation> annotate(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m);
double total_energy(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m);
std::vector<double> gate_epsilons(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m);

struct BalanceReport {
    bool balanced = false;
    double t_cp = 0.0;
    std::vector<double> residual;  // slack per gate: T_cp - (T_imax + T_omax - T_g); 0 for constants
    double max_residual = 0.0;
    int worst_gate = -1;
};
BalanceReport is_balanced(const LogicNetwork& net, const std::vector<double>& delays, double rel_tol = 1e-9);

// Raises every gate's delay by its slack, visiting gates in reverse topological
// order; the result is balanced with the same T_cp. O(gates + edges).
std::vector<double> absorb_slack(const LogicNetwork& net, std::vector<double> delays);

struct IpdbOptions {
    std::uint64_t path_cap = 200000;  // above this, use slack absorption
    bool force_fallback = false;
};
struct IpdbResult {
    DelayAssignment assignment;
    bool enumerated = false;      // Algorithm 1 over explicit paths
    std::uint64_t path_count = 0;
    std::vector<int> update_order;  // gates in the order their delay was set
};
// Delay factors start at 1; updated gates get current factor 1/sqrt(df) so
// their energy is unchanged.
IpdbResult ipdb(const LogicNetwork& net, const IpdbOptions& opt = {});

struct IpdrMove {
    enum class Dir { Upstream, Downstream };
    int gate = -1;
    std::vector<int> path;  // optional: the path rho_k the move acts along
    double amount = 0.0;    // T_1 in delay-factor units
    Dir dir = Dir::Downstream;
};

struct IpdrOptions {
    double min_delay = 0.1;  // side gates whose start is pushed keep at least this delay
    double rel_tol = 1e-9;
};

struct IpdrOutcome {
    DelayAssignment assignment;
    double delta_total_delay = 0.0;  // sum of c_g * df change (energy change at equal currents, in c*units)
};

// One redistribution move on a balanced assignment. Upstream: the predecessor
// of `gate` on the path finishes T_1 later (it grows, `gate` shrinks).
// Downstream: `gate` finishes T_1 earlier (it shrinks, its successors grow).
// Side gates whose start moves are pushed, then remaining slack is absorbed.
// Throws DomainError naming the first violated condition.
IpdrOutcome ipdr(const LogicNetwork& net, const DelayAssignment& a, const IpdrMove& move, const IpdrOptions& opt = {});

struct ScheduleProfile {
    int p = 6;                  // number of MSB outputs to make error prone; 0 = identity
    double fast_factor = 0.15;  // delay factor of the fast critical-path gates
    double min_delay = 0.1;
};

struct ScheduleResult {
    DelayAssignment assignment;
    std::vector<IpdrMove> moves;
    std::vector<int> fast_gates;
    std::string report;  // empty when fully applied
};

// Speeds up the critical-path gates that only feed the top p output bits
// (their delay factor becomes fast_factor) and hands the saved time to the
// earlier critical-path gates, through a sequence of upstream ipdr moves.
ScheduleResult ipdr_schedule(const LogicNetwork& net, const DelayAssignment& a, const ScheduleProfile& prof);

// I-PDB, then any gate whose error rate would fall below eps_floor keeps its
// I-PDB delay and lowers its current to sit exactly at the floor.
DelayAssignment constrained_ipdb(const LogicNetwork& net, const OperatingModel& m, double eps_floor,
                                 const IpdbOptions& opt = {});

// Rescales currents of `region` gates by scale[i] * lambda, with lambda chosen
// so the region's total energy is unchanged. Delays are untouched.
DelayAssignment current_redistribute(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m,
                                     const std::vector<int>& region, const std::vector<double>& scale);

TimingSummary timing_summary(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m);

}  // namespace spinsc
