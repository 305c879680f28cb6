#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinsc/delay_shaping.hpp"
#include "spinsc/netlist.hpp"
#include "spinsc/noisy_sim.hpp"

namespace spinsc {

struct FusionParams {
    int l = 8;    // output precision in bits
    int p_k = 1;  // number of distinct peaks in the shaped error PMF

    int s() const;              // ceil(log2 p_k)
    std::int64_t step() const;  // 2^(l - s)
    void validate() const;
};

struct FuseResult {
    std::int64_t y_hat = 0;
    std::int64_t eta_hat = 0;
};

// eta_hat = step * floor((y_a - y_e)/step + 1/2), y_hat = y_a - eta_hat, in exact integers.
FuseResult fuse(std::int64_t y_a, std::int64_t y_e, const FusionParams& p);

struct SparsityReport {
    int peak_count = 0;
    std::int64_t min_separation = 0;  // 0 when fewer than two peaks
    double tail_mass = 1.0;           // probability outside the peaks
    std::vector<std::int64_t> peaks;
    double score() const { return 1.0 - tail_mass; }
    bool sparse_for(const FusionParams& p) const;
};
SparsityReport pmf_sparsity(const ErrorPmf& pmf, double delta);

struct ConditionReport {
    bool pass = false;
    double margin = 0.0;  // min MSB-set rate / max LSB-set rate
    double min_msb = 0.0, max_lsb = 0.0;
    std::string note;
};
// Eq. A11: the p most significant outputs must each be at least ratio_min times
// more error prone than every remaining output. The profile is ordered LSB first.
ConditionReport check_sparsity_condition(const BitErrorProfile& profile, int p, double ratio_min = 10.0);

enum class Region : std::uint8_t { MainBlock, Estimator, Fusion };
const char* to_string(Region r);

// A signed tap word scaled by 2^shift, contributed to the estimate.
struct EstimatorTerm {
    std::string tap;
    int shift = 0;
};

struct EcConfig {
    double eps_ratio = 1e-4;     // EC gate epsilon relative to eps_cp_avg
    double eps_absolute = 0.0;   // > 0 overrides eps_ratio
    double fusion_delay_factor = 4.0;  // pipelined fusion stage runs at a relaxed delay
    int drop_bits = 0;           // estimator columns below this are not summed
    int p_k = 4;
    // Adds an l-bit input word trim0..trim{l-1} to the estimate, so the fusion
    // offset can be calibrated at the operating point without rebuilding.
    bool trim_input = false;
};

struct SiscArchitecture {
    LogicNetwork network;          // main block + estimator CSA + fusion; output groups ya, ye, yhat
    std::vector<Region> region;    // per gate
    FusionParams fusion;
    EcConfig ec;
    std::int64_t estimator_constant = 0;
    std::size_t mb_gates = 0, est_gates = 0, fusion_gates = 0;
    double ec_ratio() const { return mb_gates ? double(est_gates + fusion_gates) / double(mb_gates) : 0.0; }
    std::string warning;
};

// main: network whose default output group is y_a (two's complement, l bits).
// The estimator sums the tap words plus `constant`; the fusion block realizes
// fuse() in three adders.
SiscArchitecture compose_sisc(const LogicNetwork& main, const std::vector<EstimatorTerm>& terms,
                              std::int64_t constant, const EcConfig& ec);

// Extends a main-block assignment to the composed network: estimator gates at
// unit delay and fusion gates at the relaxed delay, both with the current that
// gives the EC epsilon.
DelayAssignment extend_assignment(const SiscArchitecture& arch, const DelayAssignment& main,
                                  const OperatingModel& m, double eps_ec);

}  // namespace spinsc
