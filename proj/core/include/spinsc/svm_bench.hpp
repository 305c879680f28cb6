#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinsc/delay_shaping.hpp"
#include "spinsc/device_model.hpp"
#include "spinsc/netlist.hpp"
#include "spinsc/sisc.hpp"

namespace spinsc {

struct SvmModel {
    std::vector<int> w;  // signed 8-bit weights
    std::int64_t b = 0;  // bias in the units of w . x

    std::size_t n() const { return w.size(); }
    void validate() const;
    std::int64_t score(const std::vector<std::uint8_t>& x) const;  // w . x + b
};

struct Dataset {
    std::vector<std::vector<std::uint8_t>> x;
    std::vector<int> z;  // +1 / -1
    std::string provenance;

    std::size_t size() const { return x.size(); }
    std::size_t n_features() const { return x.empty() ? 0 : x[0].size(); }
    void validate() const;
};

struct SyntheticSet {
    Dataset data;
    SvmModel model;
};
// Two Gaussian classes (per-feature std 24 around 128, means offset along a
// random unit direction by +-separation*24/2, so separation is the Mahalanobis
// distance), quantized to 8 bits. The weights are a diagonal LDA fit scaled to
// the 8-bit range; the bias sits halfway between the class means.
SyntheticSet synth_dataset(int n_features, int n_samples, double separation, std::uint64_t seed);

// CSV: columns f0..f{N-1}, label.
Dataset load_dataset(const std::string& path);
void save_dataset(const std::string& path, const Dataset& d);
// CSV: columns term, value; rows w0..w{N-1} then bias.
SvmModel load_model(const std::string& path);
void save_model(const std::string& path, const SvmModel& m);

enum class SvmStyle { Serial, Shannon, Nmr };
const char* to_string(SvmStyle s);

struct ShannonConfig {
    bool reorder = true;
    bool ipdb = true;
    double eps_floor_ratio = 1e-3;  // constrained I-PDB floor relative to eps_cp_avg; 0 disables
    bool ipdr = false;  // see the README: the schedule squeezes side gates of the long CSA chain
    double fast_factor = 0.15;
    bool redistribute = true;
    // Current profile by the lowest output column c a gate can reach. Errors
    // are biased toward the previous state, so a column's contribution to the
    // mean error grows like 2^c: below the fused columns the current scale is
    // 1 + ramp * c; columns >= l - s, which fusion corrects, take msb_scale;
    // gates feeding the estimator taps take tap_scale. The whole profile is
    // then renormalized to the main block's energy.
    double ramp = 0.1;
    double msb_scale = 0.5;
    double tap_scale = 2.0;
    int rpe_bits = 5;
    // Calibrate the fusion offset per operating point: the circular mean of
    // (y_a - y_e) modulo the fusion step, measured on a separate noisy pass.
    bool trim = true;
    std::size_t trim_trials = 1024;
    EcConfig ec;  // ec.p_k = 0 selects p_k from the estimation error on the dataset
};

struct SvmArchitecture {
    SvmStyle style = SvmStyle::Serial;
    int n_m = 1;
    SvmModel model;
    std::vector<int> order;  // CSA row j accumulates dimension order[j]
    int width = 0;           // accumulator width l
    std::int64_t bias_constant = 0;
    LogicNetwork network;
    std::vector<Region> region;
    std::string decision_group;
    std::vector<std::vector<int>> x_input, w_input;  // input indices per dimension and bit
    std::vector<int> trim_input;                      // Shannon with trim: trim word inputs, LSB first

    // Shannon only
    ShannonConfig shannon;
    LogicNetwork main_block;    // standalone MB (gate ids are a prefix of network)
    DelayAssignment mb_shaped;  // I-PDB + I-PDR in factor units
    std::vector<int> column;    // per MB gate: lowest reachable output column
    std::vector<char> tap_cone; // per MB gate: feeds an estimator tap
    SiscArchitecture sisc;      // composed network lives in `network`
    std::int64_t estimator_constant = 0;
    std::string shaping_report;

    std::size_t gate_count(Region r) const;
    double ec_ratio() const;
};

SvmArchitecture build_serial(const SvmModel& model);
SvmArchitecture build_nmr(const SvmModel& model, int n_m);
// `calibration` supplies the estimation-error statistics when cfg.ec.p_k == 0.
SvmArchitecture build_shannon(const SvmModel& model, const ShannonConfig& cfg, const Dataset& calibration);

// Software model of the estimator word for one input.
std::int64_t estimator_value(const SvmArchitecture& arch, const std::vector<std::uint8_t>& x);

struct EnergyReport {
    double total_J = 0.0;
    double delay_s = 0.0;  // decision delay: critical path over MB and estimator
    double mb_J = 0.0, est_J = 0.0, ec_J = 0.0;
};

struct SvmOperatingPoint {
    double eps_cp_avg = 0.01;
    double unit_delay = 0.0;     // s; 0 uses the abstract default for eps 1e-2 at overdrive 5
    double eps_ec_ratio = 1e-4;  // EC / voter gate epsilon relative to eps_cp_avg
    double eps_ec_absolute = 0.0;  // > 0 overrides the ratio
    DeviceParams device;

    OperatingModel model() const;
    double eps_ec() const;
};

DelayAssignment assignment_at(const SvmArchitecture& arch, const SvmOperatingPoint& op);
EnergyReport energy_at(const SvmArchitecture& arch, const SvmOperatingPoint& op);

struct ClassifierMetrics {
    double p_tp = 0.0, p_fa = 0.0;
    WilsonInterval tp_ci, fa_ci;
    std::size_t trials = 0, positives = 0, negatives = 0;
    std::int64_t threshold = 0;  // decide +1 when the score is >= threshold
    bool calibrated = false;
    std::size_t oracle_mismatches = 0;  // noiseless decode != software score
    std::size_t word_errors = 0;        // noisy decode != software score
    std::int64_t fusion_trim = 0;       // Shannon: calibrated estimator offset
    std::string note;
};

struct EvalOptions {
    std::size_t trials = 4000;
    std::uint64_t seed = 1;
    bool calibrate = true;
    double target_p_fa = 0.01;
    bool noiseless = false;  // force every gate epsilon to 0
    bool keep_scores = false;
};

struct EvalResult {
    ClassifierMetrics metrics;
    EnergyReport energy;
    std::vector<std::int64_t> scores, reference;  // per trial, with keep_scores
};

EvalResult evaluate(const SvmArchitecture& arch, const Dataset& data, const SvmOperatingPoint& op,
                    const EvalOptions& opt);

// Threshold at which at most floor(target * negatives) negatives score at or above it.
ClassifierMetrics classify_scores(const std::vector<std::int64_t>& scores, const std::vector<int>& labels,
                                  bool calibrate, double target_p_fa);

struct SweepPoint {
    double eps_cp_avg = 0.0;
    EvalResult result;
};
// Smallest eps (log-interpolated between grid points) at which p_TP drops
// below `target`; +inf if it never does on the grid.
double crossing_epsilon(const std::vector<SweepPoint>& sweep, double target);

}  // namespace spinsc
