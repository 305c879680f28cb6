#include "spinsc/netlist.hpp"

#include <algorithm>
#include <set>

#include "spinsc/errors.hpp"

namespace spinsc {

bool Gate::has_tag(const std::string& t) const {
    return std::find(tags.begin(), tags.end(), t) != tags.end();
}

int LogicNetwork::add_input(const std::string& nm, int complement_of) {
    inputs.push_back({nm, complement_of});
    return int(inputs.size()) - 1;
}

int LogicNetwork::add_gate(GateKind kind, std::vector<Fanin> fanins, std::vector<std::string> tags) {
    Gate g;
    g.id = int(gates.size());
    g.kind = kind;
    g.fanins = std::move(fanins);
    g.tags = std::move(tags);
    gates.push_back(std::move(g));
    cache_valid_ = false;
    return gates.back().id;
}

void LogicNetwork::add_output(const std::string& nm, int gate, int bit, bool sign, const std::string& group) {
    outputs.push_back({nm, gate, bit, sign, group});
    cache_valid_ = false;
}

int LogicNetwork::input_index(const std::string& nm) const {
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (inputs[i].name == nm) return int(i);
    return -1;
}

std::size_t LogicNetwork::free_input_count() const {
    std::size_t n = 0;
    for (const auto& in : inputs)
        if (in.complement_of < 0) ++n;
    return n;
}

void LogicNetwork::invalidate_cache() { cache_valid_ = false; }

std::vector<Diagnostic> LogicNetwork::validate() const {
    std::vector<Diagnostic> diags;
    const int n = int(gates.size());
    bool refs_ok = true;
    for (int g = 0; g < n; ++g) {
        const Gate& gt = gates[g];
        if (gt.id != g)
            diags.push_back({"id", "gate at position " + std::to_string(g) + " has id " + std::to_string(gt.id)});
        if (int(gt.fanins.size()) != gate_arity(gt.kind))
            diags.push_back({"arity", "gate " + std::to_string(g) + " (" + to_string(gt.kind) + ") has " +
                                          std::to_string(gt.fanins.size()) + " fanins, expected " +
                                          std::to_string(gate_arity(gt.kind))});
        for (const Fanin& f : gt.fanins) {
            bool bad = false;
            if (f.src == Fanin::Src::Gate) bad = f.index < 0 || f.index >= n;
            else if (f.src == Fanin::Src::Input) bad = f.index < 0 || f.index >= int(inputs.size());
            else bad = f.index != 0 && f.index != 1;
            if (bad) {
                refs_ok = false;
                diags.push_back({"unknown-fanin", "gate " + std::to_string(g) + " references a missing source"});
            }
        }
    }
    for (std::size_t i = 0; i < inputs.size(); ++i) {
        int c = inputs[i].complement_of;
        if (c >= int(inputs.size()) || c == int(i) || (c >= 0 && inputs[c].complement_of >= 0))
            diags.push_back({"complement", "input " + inputs[i].name + " has an invalid complement source"});
    }
    for (const auto& o : outputs) {
        if (o.gate < 0 || o.gate >= n)
            diags.push_back({"dangling-output", "output " + o.name + " is not driven by a gate"});
    }
    std::set<std::string> names;
    for (const auto& o : outputs)
        if (!names.insert(o.name).second)
            diags.push_back({"duplicate-output", "output " + o.name + " declared twice"});
    if (!refs_ok) return diags;

    // Cycle check (Kahn).
    std::vector<int> indeg(n, 0);
    std::vector<std::vector<int>> fo(n);
    for (int g = 0; g < n; ++g)
        for (const Fanin& f : gates[g].fanins)
            if (f.is_gate()) {
                ++indeg[g];
                fo[f.index].push_back(g);
            }
    std::vector<int> stack;
    for (int g = 0; g < n; ++g)
        if (indeg[g] == 0) stack.push_back(g);
    int seen = 0;
    while (!stack.empty()) {
        int g = stack.back();
        stack.pop_back();
        ++seen;
        for (int s : fo[g])
            if (--indeg[s] == 0) stack.push_back(s);
    }
    if (seen != n) {
        for (int g = 0; g < n; ++g)
            if (indeg[g] > 0) {
                diags.push_back({"cycle", "gate " + std::to_string(g) + " lies on a cycle"});
                break;
            }
        return diags;
    }

    // Every gate must feed some output, and every timed gate must be fed by something
    // other than constants only (otherwise it never sees a primary input).
    std::vector<char> live(n, 0);
    for (const auto& o : outputs)
        if (o.gate >= 0 && o.gate < n) live[o.gate] = 1;
    std::vector<int> order;
    {
        std::vector<int> deg(n, 0);
        for (int g = 0; g < n; ++g)
            for (const Fanin& f : gates[g].fanins)
                if (f.is_gate()) ++deg[g];
        std::vector<int> q;
        for (int g = 0; g < n; ++g)
            if (deg[g] == 0) q.push_back(g);
        for (std::size_t h = 0; h < q.size(); ++h)
            for (int s : fo[q[h]])
                if (--deg[s] == 0) q.push_back(s);
        order = q;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        if (live[*it])
            for (const Fanin& f : gates[*it].fanins)
                if (f.is_gate()) live[f.index] = 1;
    std::vector<char> fed(n, 0);
    for (int g : order) {
        if (is_constant(gates[g].kind)) continue;
        for (const Fanin& f : gates[g].fanins)
            if (f.src == Fanin::Src::Input || (f.is_gate() && fed[f.index])) fed[g] = 1;
    }
    for (int g = 0; g < n; ++g) {
        if (!live[g])
            diags.push_back({"unreachable", "gate " + std::to_string(g) + " does not reach any primary output"});
        else if (!is_constant(gates[g].kind) && !fed[g])
            diags.push_back({"unreachable", "gate " + std::to_string(g) + " is not reachable from a primary input"});
    }
    return diags;
}

void LogicNetwork::require_valid() const {
    auto d = validate();
    if (!d.empty()) throw ConfigError("netlist", d.front().code + ": " + d.front().message);
}

void LogicNetwork::build_cache() const {
    if (cache_valid_) return;
    const int n = int(gates.size());
    fanouts_.assign(n, {});
    std::vector<int> deg(n, 0);
    for (int g = 0; g < n; ++g)
        for (const Fanin& f : gates[g].fanins)
            if (f.is_gate()) {
                if (f.index < 0 || f.index >= n) throw ConfigError("netlist", "gate " + std::to_string(g) + " references a missing gate");
                ++deg[g];
                fanouts_[f.index].push_back(g);
            }
    // Kahn with a min-id ready set keeps the order canonical.
    std::set<int> ready;
    for (int g = 0; g < n; ++g)
        if (deg[g] == 0) ready.insert(g);
    topo_.clear();
    topo_.reserve(n);
    while (!ready.empty()) {
        int g = *ready.begin();
        ready.erase(ready.begin());
        topo_.push_back(g);
        for (int s : fanouts_[g])
            if (--deg[s] == 0) ready.insert(s);
    }
    if (int(topo_.size()) != n) throw ConfigError("netlist", "network contains a cycle");
    po_node_.assign(n, 0);
    for (const auto& o : outputs)
        if (o.gate >= 0 && o.gate < n) po_node_[o.gate] = 1;
    cache_valid_ = true;
}

const std::vector<int>& LogicNetwork::topo_order() const {
    build_cache();
    return topo_;
}
const std::vector<std::vector<int>>& LogicNetwork::fanouts() const {
    build_cache();
    return fanouts_;
}
const std::vector<char>& LogicNetwork::is_po_node() const {
    build_cache();
    return po_node_;
}

bool LogicNetwork::is_pi_node(int g) const {
    if (!timed(g)) return false;
    for (const Fanin& f : gates[g].fanins)
        if (!f.is_gate() || !timed(f.index)) return true;
    return false;
}

std::vector<int> LogicNetwork::prune() {
    const int n = int(gates.size());
    build_cache();
    std::vector<char> live(n, 0);
    for (const auto& o : outputs) live[o.gate] = 1;
    for (auto it = topo_.rbegin(); it != topo_.rend(); ++it)
        if (live[*it])
            for (const Fanin& f : gates[*it].fanins)
                if (f.is_gate()) live[f.index] = 1;
    std::vector<int> remap(n, -1);
    std::vector<Gate> kept;
    for (int g = 0; g < n; ++g)
        if (live[g]) {
            remap[g] = int(kept.size());
            kept.push_back(gates[g]);
        }
    for (auto& g : kept) {
        g.id = remap[g.id];
        for (auto& f : g.fanins)
            if (f.is_gate()) f.index = remap[f.index];
    }
    gates = std::move(kept);
    for (auto& o : outputs) o.gate = remap[o.gate];
    for (auto& [name, sigs] : taps)
        for (auto& f : sigs)
            if (f.is_gate()) {
                if (remap[f.index] < 0) throw ConfigError("netlist", "tap " + name + " references a pruned gate");
                f.index = remap[f.index];
            }
    cache_valid_ = false;
    return remap;
}

void LogicNetwork::complete_inputs(std::vector<std::uint8_t>& in) const {
    if (in.size() != inputs.size())
        throw ConfigError("netlist", "input vector has " + std::to_string(in.size()) + " bits, network has " +
                                         std::to_string(inputs.size()) + " inputs");
    for (std::size_t i = 0; i < inputs.size(); ++i)
        if (inputs[i].complement_of >= 0) in[i] = in[inputs[i].complement_of] ^ 1;
}

std::vector<int> LogicNetwork::group_outputs(const std::string& group) const {
    std::vector<int> r;
    for (std::size_t k = 0; k < outputs.size(); ++k)
        if (outputs[k].group == group) r.push_back(int(k));
    return r;
}

std::int64_t LogicNetwork::decode(const std::vector<std::uint8_t>& bits, const std::string& group) const {
    std::int64_t v = 0;
    for (std::size_t k = 0; k < outputs.size(); ++k) {
        if (outputs[k].group != group || !(bits[k] & 1)) continue;
        std::int64_t w = std::int64_t(1) << outputs[k].bit;
        v += outputs[k].sign ? -w : w;
    }
    return v;
}

std::int64_t LogicNetwork::output_min(const std::string& group) const {
    std::int64_t v = 0;
    for (const auto& o : outputs)
        if (o.group == group && o.sign) v -= std::int64_t(1) << o.bit;
    return v;
}

std::int64_t LogicNetwork::output_max(const std::string& group) const {
    std::int64_t v = 0;
    for (const auto& o : outputs)
        if (o.group == group && !o.sign) v += std::int64_t(1) << o.bit;
    return v;
}

std::uint8_t gate_function(GateKind k, std::uint8_t a, std::uint8_t b, std::uint8_t c) {
    switch (k) {
        case GateKind::MAJ3: return std::uint8_t((a & b) | (a & c) | (b & c));
        case GateKind::MIN3: return std::uint8_t(((a & b) | (a & c) | (b & c)) ^ 1);
        case GateKind::INV: return std::uint8_t(a ^ 1);
        case GateKind::BUF: return a;
        case GateKind::CONST0: return 0;
        case GateKind::CONST1: return 1;
    }
    return 0;
}

std::vector<std::uint8_t> eval_gates(const LogicNetwork& net, std::vector<std::uint8_t> inputs) {
    net.complete_inputs(inputs);
    std::vector<std::uint8_t> val(net.gates.size(), 0);
    auto read = [&](const Fanin& f) -> std::uint8_t {
        switch (f.src) {
            case Fanin::Src::Gate: return val[f.index];
            case Fanin::Src::Input: return inputs[f.index] & 1;
            default: return std::uint8_t(f.index);
        }
    };
    for (int g : net.topo_order()) {
        const Gate& gt = net.gates[g];
        std::uint8_t v[3] = {0, 0, 0};
        for (std::size_t k = 0; k < gt.fanins.size() && k < 3; ++k) v[k] = read(gt.fanins[k]);
        val[g] = gate_function(gt.kind, v[0], v[1], v[2]);
    }
    return val;
}

std::vector<std::uint8_t> eval_noiseless(const LogicNetwork& net, std::vector<std::uint8_t> inputs) {
    auto val = eval_gates(net, std::move(inputs));
    std::vector<std::uint8_t> out(net.outputs.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = val[net.outputs[k].gate];
    return out;
}

}  // namespace spinsc
