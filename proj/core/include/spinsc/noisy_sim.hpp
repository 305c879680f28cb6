#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "spinsc/device_model.hpp"
#include "spinsc/netlist.hpp"

namespace spinsc {

struct EpsilonAssignment {
    enum class Provenance { Physical, Abstract };
    std::vector<double> eps;  // per gate
    Provenance provenance = Provenance::Abstract;

    static EpsilonAssignment constant(const LogicNetwork& net, double e);
    void validate(const LogicNetwork& net) const;
};

struct TrialProtocol {
    enum class Mode { ResetThenApply, Streaming };
    Mode mode = Mode::ResetThenApply;
    std::vector<std::uint8_t> reset_vector;  // empty: all free inputs 0
    bool random_initial_state = false;       // streaming mode only
    std::size_t trials = 1;
    std::uint64_t seed = 1;
};

// Fig. 2B semantics: compute the ideal output C_o; an error can only occur when
// the gate has to switch (C_o != prev), in which case it fails with probability
// eps. `u` is a uniform draw in [0, 1).
std::uint8_t noisy_gate_step(GateKind kind, std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t prev,
                             double eps, double u);

// Fills the free inputs of one trial. Complement inputs are derived afterwards.
using InputSampler = std::function<void(std::uint64_t trial, std::vector<std::uint8_t>& inputs)>;

// Independent uniform bits on every free input; `fixed` pins inputs by name.
InputSampler uniform_input_sampler(const LogicNetwork& net, std::uint64_t seed,
                                   const std::map<std::string, int>& fixed = {});

// Output bits of every trial, noisy (ya) and noiseless (yo), packed 64 trials per word.
struct Samples {
    std::size_t trials = 0;
    std::size_t n_outputs = 0;
    std::vector<std::vector<std::uint64_t>> ya, yo;  // [output][block]

    std::uint8_t bit(bool noisy, std::size_t output, std::size_t trial) const {
        const auto& w = noisy ? ya : yo;
        return std::uint8_t((w[output][trial >> 6] >> (trial & 63)) & 1);
    }
    std::int64_t decode(const LogicNetwork& net, bool noisy, std::size_t trial, const std::string& group = "") const;
};

// Gate-level engine with the fanin lists flattened for speed.
class Simulator {
public:
    explicit Simulator(const LogicNetwork& net);
    Samples run(const EpsilonAssignment& eps, const TrialProtocol& protocol, const InputSampler& sampler) const;
    std::size_t gate_count() const { return kind_.size(); }

private:
    const LogicNetwork& net_;
    std::vector<int> order_;
    std::vector<GateKind> kind_;
    std::vector<std::array<int, 3>> fan_;  // slot indices into the value array
    int n_in_ = 0;
    std::vector<int> out_slot_;
    int slot_of(const Fanin& f) const;
};

struct ErrorPmf {
    std::map<std::int64_t, std::uint64_t> counts;
    std::uint64_t samples = 0;
    std::int64_t range_lo = 0, range_hi = 0;  // open interval of admissible values

    double probability(std::int64_t v) const;
    double total_probability() const;
    void add(std::int64_t v) {
        ++counts[v];
        ++samples;
    }
};

// eta = decode(y_a) - decode(y_o) per trial, over one output group.
ErrorPmf error_pmf(const LogicNetwork& net, const Samples& s, const std::string& group = "");

struct MonteCarloResult {
    ErrorPmf pmf;
    Samples samples;
};
MonteCarloResult monte_carlo_error_pmf(const LogicNetwork& net, const EpsilonAssignment& eps,
                                       const TrialProtocol& protocol, const InputSampler& sampler);

struct BitErrorProfile {
    std::vector<double> rate;
    std::vector<double> ci_low, ci_high;
    std::vector<std::uint64_t> flips;
    std::uint64_t trials = 0;
};
// Per-output XOR rates over the outputs of one group (ordered by bit).
BitErrorProfile bit_error_profile(const LogicNetwork& net, const Samples& s, const std::string& group = "");
// Eq. A10: eta rebuilt from beta_i and y_o bits for one trial.
std::int64_t eta_from_bits(const LogicNetwork& net, const Samples& s, std::size_t trial, const std::string& group = "");

}  // namespace spinsc
