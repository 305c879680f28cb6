#include "spinsc/noisy_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "spinsc/errors.hpp"
#include "spinsc/rng.hpp"

namespace spinsc {

namespace {

constexpr std::uint64_t kNoiseStream = 0x6e6f697365ULL;  // "noise"
constexpr std::uint64_t kInitStream = 0x696e6974ULL;     // "init"

inline std::uint64_t word_fn(GateKind k, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
    switch (k) {
        case GateKind::MAJ3: return (a & b) | (a & c) | (b & c);
        case GateKind::MIN3: return ~((a & b) | (a & c) | (b & c));
        case GateKind::INV: return ~a;
        case GateKind::BUF: return a;
        case GateKind::CONST0: return 0;
        case GateKind::CONST1: return ~std::uint64_t(0);
    }
    return 0;
}

}  // namespace

EpsilonAssignment EpsilonAssignment::constant(const LogicNetwork& net, double e) {
    EpsilonAssignment a;
    a.eps.assign(net.gates.size(), e);
    for (std::size_t g = 0; g < net.gates.size(); ++g)
        if (!net.timed(int(g))) a.eps[g] = 0.0;
    return a;
}

void EpsilonAssignment::validate(const LogicNetwork& net) const {
    if (eps.size() != net.gates.size())
        throw ConfigError("noisy_sim", "epsilon assignment covers " + std::to_string(eps.size()) + " gates, network has " +
                                           std::to_string(net.gates.size()));
    for (std::size_t g = 0; g < eps.size(); ++g)
        if (!(eps[g] >= 0 && eps[g] <= 1))
            throw ConfigError("noisy_sim", "gate " + std::to_string(g) + " has epsilon outside [0, 1]");
}

std::uint8_t noisy_gate_step(GateKind kind, std::uint8_t a, std::uint8_t b, std::uint8_t c, std::uint8_t prev,
                             double eps, double u) {
    std::uint8_t co = gate_function(kind, a & 1, b & 1, c & 1);
    if (co == (prev & 1)) return co;
    return std::uint8_t(co ^ (u < eps ? 1 : 0));
}

InputSampler uniform_input_sampler(const LogicNetwork& net, std::uint64_t seed, const std::map<std::string, int>& fixed) {
    std::vector<int> pinned(net.inputs.size(), -1);
    for (const auto& [name, v] : fixed) {
        int idx = net.input_index(name);
        if (idx < 0) throw ConfigError("noisy_sim", "unknown input '" + name + "' in sampler");
        pinned[idx] = v & 1;
    }
    const std::uint64_t s = derive_seed(seed, 0x696e707574ULL);
    return [pinned, s](std::uint64_t trial, std::vector<std::uint8_t>& in) {
        for (std::size_t k = 0; k < in.size(); ++k)
            in[k] = pinned[k] >= 0 ? std::uint8_t(pinned[k]) : std::uint8_t(hash_draw(s, trial, k) >> 63);
    };
}

std::int64_t Samples::decode(const LogicNetwork& net, bool noisy, std::size_t trial, const std::string& group) const {
    std::int64_t v = 0;
    for (std::size_t k = 0; k < n_outputs; ++k) {
        const auto& o = net.outputs[k];
        if (o.group != group || !bit(noisy, k, trial)) continue;
        std::int64_t w = std::int64_t(1) << o.bit;
        v += o.sign ? -w : w;
    }
    return v;
}

Simulator::Simulator(const LogicNetwork& net) : net_(net) {
    net.require_valid();
    n_in_ = int(net.inputs.size());
    for (int g : net.topo_order()) order_.push_back(g);
    kind_.resize(net.gates.size());
    fan_.resize(net.gates.size());
    for (std::size_t g = 0; g < net.gates.size(); ++g) {
        kind_[g] = net.gates[g].kind;
        std::array<int, 3> f{n_in_, n_in_, n_in_};
        for (std::size_t k = 0; k < net.gates[g].fanins.size() && k < 3; ++k) f[k] = slot_of(net.gates[g].fanins[k]);
        fan_[g] = f;
    }
    for (const auto& o : net.outputs) out_slot_.push_back(n_in_ + 2 + o.gate);
}

int Simulator::slot_of(const Fanin& f) const {
    switch (f.src) {
        case Fanin::Src::Input: return f.index;
        case Fanin::Src::Const: return n_in_ + f.index;
        default: return n_in_ + 2 + f.index;
    }
}

Samples Simulator::run(const EpsilonAssignment& eps, const TrialProtocol& protocol, const InputSampler& sampler) const {
    eps.validate(net_);
    if (protocol.trials < 1) throw ConfigError("noisy_sim", "trials must be at least 1");
    const std::size_t n_slots = std::size_t(n_in_) + 2 + kind_.size();
    const std::size_t n_out = out_slot_.size();
    const std::size_t trials = protocol.trials;
    const std::size_t blocks = (trials + 63) / 64;
    const std::uint64_t noise_seed = derive_seed(protocol.seed, kNoiseStream);

    Samples s;
    s.trials = trials;
    s.n_outputs = n_out;
    s.ya.assign(n_out, std::vector<std::uint64_t>(blocks, 0));
    s.yo.assign(n_out, std::vector<std::uint64_t>(blocks, 0));

    // Gate state before each trial.
    std::vector<std::uint8_t> state(kind_.size(), 0);
    if (protocol.mode == TrialProtocol::Mode::ResetThenApply || !protocol.random_initial_state) {
        std::vector<std::uint8_t> reset = protocol.reset_vector;
        if (reset.empty()) reset.assign(n_in_, 0);
        if (int(reset.size()) != n_in_) throw ConfigError("noisy_sim", "reset vector length does not match the inputs");
        state = eval_gates(net_, reset);
    } else {
        const std::uint64_t s0 = derive_seed(protocol.seed, kInitStream);
        for (std::size_t g = 0; g < state.size(); ++g)
            state[g] = is_constant(kind_[g]) ? gate_function(kind_[g], 0, 0, 0) : std::uint8_t(hash_draw(s0, 0, g) >> 63);
    }
    const bool streaming = protocol.mode == TrialProtocol::Mode::Streaming;

    std::vector<std::uint64_t> val(n_slots), valo(n_slots), prevw(kind_.size());
    std::vector<std::uint8_t> in(n_in_);
    for (std::size_t b = 0; b < blocks; ++b) {
        // Streaming runs one trial per pass so each trial sees its predecessor's state.
        const std::size_t lanes_total = std::min<std::size_t>(64, trials - b * 64);
        const std::size_t passes = streaming ? lanes_total : 1;
        for (std::size_t pass = 0; pass < passes; ++pass) {
            const std::size_t lane0 = streaming ? pass : 0;
            const std::size_t lanes = streaming ? 1 : lanes_total;
            const std::uint64_t mask = (lanes == 64 ? ~std::uint64_t(0) : ((std::uint64_t(1) << lanes) - 1)) << lane0;
            std::fill(val.begin(), val.begin() + n_in_, 0);
            for (std::size_t l = lane0; l < lane0 + lanes; ++l) {
                const std::uint64_t trial = b * 64 + l;
                sampler(trial, in);
                net_.complete_inputs(in);
                for (int k = 0; k < n_in_; ++k)
                    if (in[k] & 1) val[k] |= std::uint64_t(1) << l;
            }
            std::copy(val.begin(), val.begin() + n_in_, valo.begin());
            val[n_in_] = valo[n_in_] = 0;
            val[n_in_ + 1] = valo[n_in_ + 1] = ~std::uint64_t(0);
            for (std::size_t g = 0; g < kind_.size(); ++g) prevw[g] = state[g] ? ~std::uint64_t(0) : 0;
            for (int g : order_) {
                const auto& f = fan_[g];
                const GateKind k = kind_[g];
                const std::uint64_t co = word_fn(k, val[f[0]], val[f[1]], val[f[2]]);
                valo[n_in_ + 2 + g] = word_fn(k, valo[f[0]], valo[f[1]], valo[f[2]]);
                std::uint64_t sw = (co ^ prevw[g]) & mask;
                std::uint64_t flips = 0;
                const double e = eps.eps[g];
                if (sw && e > 0) {
                    if (e >= 1) {
                        flips = sw;
                    } else {
                        while (sw) {
                            const int l = std::countr_zero(sw);
                            sw &= sw - 1;
                            if (uniform_draw(noise_seed, b * 64 + l, std::uint64_t(g)) < e) flips |= std::uint64_t(1) << l;
                        }
                    }
                }
                val[n_in_ + 2 + g] = co ^ flips;
            }
            for (std::size_t k = 0; k < n_out; ++k) {
                s.ya[k][b] |= val[out_slot_[k]] & mask;
                s.yo[k][b] |= valo[out_slot_[k]] & mask;
            }
            if (streaming)
                for (std::size_t g = 0; g < kind_.size(); ++g) state[g] = std::uint8_t((val[n_in_ + 2 + g] >> lane0) & 1);
        }
    }
    return s;
}

double ErrorPmf::probability(std::int64_t v) const {
    auto it = counts.find(v);
    return (it == counts.end() || samples == 0) ? 0.0 : double(it->second) / double(samples);
}

double ErrorPmf::total_probability() const {
    double t = 0;
    for (const auto& [v, c] : counts) t += double(c) / double(samples);
    return t;
}

ErrorPmf error_pmf(const LogicNetwork& net, const Samples& s, const std::string& group) {
    ErrorPmf p;
    const std::int64_t span = net.output_max(group) - net.output_min(group);
    p.range_lo = -span - 1;
    p.range_hi = span + 1;
    for (std::size_t t = 0; t < s.trials; ++t) p.add(s.decode(net, true, t, group) - s.decode(net, false, t, group));
    return p;
}

MonteCarloResult monte_carlo_error_pmf(const LogicNetwork& net, const EpsilonAssignment& eps,
                                       const TrialProtocol& protocol, const InputSampler& sampler) {
    Simulator sim(net);
    MonteCarloResult r;
    r.samples = sim.run(eps, protocol, sampler);
    r.pmf = error_pmf(net, r.samples, "");
    return r;
}

BitErrorProfile bit_error_profile(const LogicNetwork& net, const Samples& s, const std::string& group) {
    auto idx = net.group_outputs(group);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return net.outputs[a].bit < net.outputs[b].bit; });
    BitErrorProfile p;
    p.trials = s.trials;
    const std::size_t blocks = (s.trials + 63) / 64;
    const std::uint64_t tail = s.trials % 64 ? (std::uint64_t(1) << (s.trials % 64)) - 1 : ~std::uint64_t(0);
    for (int k : idx) {
        std::uint64_t flips = 0;
        for (std::size_t b = 0; b < blocks; ++b)
            flips += std::popcount((s.ya[k][b] ^ s.yo[k][b]) & (b + 1 == blocks ? tail : ~std::uint64_t(0)));
        p.flips.push_back(flips);
        p.rate.push_back(s.trials ? double(flips) / double(s.trials) : 0.0);
        auto w = wilson_interval(flips, s.trials);
        p.ci_low.push_back(w.low);
        p.ci_high.push_back(w.high);
    }
    return p;
}

std::int64_t eta_from_bits(const LogicNetwork& net, const Samples& s, std::size_t trial, const std::string& group) {
    std::int64_t eta = 0;
    for (int k : net.group_outputs(group)) {
        const int beta = s.bit(true, k, trial) ^ s.bit(false, k, trial);
        if (!beta) continue;
        const int yo = s.bit(false, k, trial);
        std::int64_t w = std::int64_t(1) << net.outputs[k].bit;
        if (net.outputs[k].sign) w = -w;
        eta += w * (1 - 2 * yo);
    }
    return eta;
}

}  // namespace spinsc
