#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinsc/gate_kind.hpp"

namespace spinsc {

// A gate input: another gate, a primary input, or a tied constant.
struct Fanin {
    enum class Src : std::uint8_t { Gate, Input, Const };
    Src src = Src::Gate;
    int index = 0;  // gate id, input index, or constant value 0/1

    static Fanin gate(int id) { return {Src::Gate, id}; }
    static Fanin input(int idx) { return {Src::Input, idx}; }
    static Fanin constant(int v) { return {Src::Const, v ? 1 : 0}; }
    bool is_gate() const { return src == Src::Gate; }
    bool operator==(const Fanin&) const = default;
};

struct Gate {
    int id = 0;
    GateKind kind = GateKind::BUF;
    std::vector<Fanin> fanins;
    std::vector<std::string> tags;
    bool has_tag(const std::string& t) const;
};

struct PrimaryInput {
    std::string name;
    // Index of the input this one is the logical complement of (-1 if free).
    // Complement inputs are filled in by the evaluator, never by the caller.
    int complement_of = -1;
};

struct PrimaryOutput {
    std::string name;
    int gate = -1;
    int bit = 0;        // weight 2^bit
    bool sign = false;  // two's-complement sign bit: weight -2^bit
    std::string group;  // outputs sharing a group decode to one word
};

struct Diagnostic {
    std::string code;  // "cycle", "arity", "dangling-output", "unknown-fanin", "unreachable", ...
    std::string message;
};

class LogicNetwork {
public:
    std::string name;
    std::vector<Gate> gates;  // gates[i].id == i
    std::vector<PrimaryInput> inputs;
    std::vector<PrimaryOutput> outputs;
    // Named internal signals exposed to other blocks (e.g. estimator taps), LSB first.
    std::map<std::string, std::vector<Fanin>> taps;

    int add_input(const std::string& name, int complement_of = -1);
    int add_gate(GateKind kind, std::vector<Fanin> fanins, std::vector<std::string> tags = {});
    void add_output(const std::string& name, int gate, int bit, bool sign = false, const std::string& group = "");
    int input_index(const std::string& name) const;  // -1 if absent

    std::size_t size() const { return gates.size(); }
    std::size_t free_input_count() const;

    // Structural diagnostics; an empty list means the network is valid.
    std::vector<Diagnostic> validate() const;
    // Throws ConfigError with the first diagnostic.
    void require_valid() const;

    // Gates in topological order. Throws if cyclic.
    const std::vector<int>& topo_order() const;
    const std::vector<std::vector<int>>& fanouts() const;
    // Gates that drive at least one primary output.
    const std::vector<char>& is_po_node() const;
    // Gates that carry delay (everything except CONST0/CONST1).
    bool timed(int g) const { return !is_constant(gates[g].kind); }
    // Timed gate with at least one fanin that is not a timed gate.
    bool is_pi_node(int g) const;

    // Removes gates that cannot reach a primary output, renumbering ids.
    // Returns old-id -> new-id (-1 for removed).
    std::vector<int> prune();
    void invalidate_cache();

    // Fills complement inputs from their sources in place.
    void complete_inputs(std::vector<std::uint8_t>& in) const;

    // Decodes output bits (indexed like outputs) of one group; the default
    // group "" covers networks that expose a single word.
    std::int64_t decode(const std::vector<std::uint8_t>& out_bits, const std::string& group = "") const;
    std::vector<int> group_outputs(const std::string& group) const;
    std::int64_t output_min(const std::string& group = "") const;
    std::int64_t output_max(const std::string& group = "") const;

private:
    mutable std::vector<int> topo_;
    mutable std::vector<std::vector<int>> fanouts_;
    mutable std::vector<char> po_node_;
    mutable bool cache_valid_ = false;
    void build_cache() const;
};

// Noiseless evaluation; inputs indexed like network.inputs (complement entries ignored).
std::vector<std::uint8_t> eval_noiseless(const LogicNetwork& net, std::vector<std::uint8_t> inputs);
// Gate values too (indexed by gate id).
std::vector<std::uint8_t> eval_gates(const LogicNetwork& net, std::vector<std::uint8_t> inputs);
std::uint8_t gate_function(GateKind k, std::uint8_t a, std::uint8_t b, std::uint8_t c);

// JSON netlist I/O. Saving is canonical (ids ascending, fixed key order), so
// load -> save reproduces the file byte for byte.
LogicNetwork load_netlist(const std::string& path);
LogicNetwork parse_netlist(const std::string& json_text);
std::string netlist_to_json(const LogicNetwork& net);
void save_netlist(const std::string& path, const LogicNetwork& net);

// ---------------------------------------------------------------- timing

struct TimingSummary {
    int n_cp = 0;             // node count of the longest (by node count) path
    double t_cp = 0.0;        // max path delay
    double t_cp_avg = 0.0;    // T_cp,u / N_cp (uniform-delay critical path over N_cp)
    double eps_cp_avg = 0.0;  // filled in by delay_shaping
    std::vector<int> witness;  // one path achieving t_cp
    std::uint64_t critical_path_count = 0;  // paths achieving n_cp nodes
};

inline constexpr double kNoPath = -std::numeric_limits<double>::infinity();

struct TimingTables {
    std::vector<double> arrival;    // max PI->g delay, inclusive of g
    std::vector<double> departure;  // max g->PO delay, inclusive of g
    std::vector<int> cnt_in;        // max node count PI->g
    std::vector<int> cnt_out;       // max node count g->PO
};

TimingTables timing_tables(const LogicNetwork& net, const std::vector<double>& delays);
TimingSummary critical_path_summary(const LogicNetwork& net, const std::vector<double>& delays);

struct IoCritical {
    double t_imax = kNoPath;
    double t_omax = kNoPath;
    std::vector<int> input_path;   // PI node ... g
    std::vector<int> output_path;  // g ... PO node
};

// Path delays include g's own delay. With min_nodes > 0, only primary paths with at
// least min_nodes gates are admissible (the family of paths at least as long as rho_n).
IoCritical io_critical_paths(const LogicNetwork& net, const std::vector<double>& delays, int g,
                             int min_nodes = 0);

// ---------------------------------------------------------------- paths

using Path = std::vector<int>;

std::uint64_t count_primary_paths(const LogicNetwork& net);
// Lexicographically smallest (by gate id) path among those with N_cp gates,
// found greedily from the node-count tables without enumeration.
Path first_critical_path(const LogicNetwork& net);
// Lowest output bit reachable from each gate (INT_MAX if none).
std::vector<int> min_reachable_output_bit(const LogicNetwork& net);

struct PathSetOptions {
    std::uint64_t cap = 2'000'000;
};

// Primary paths ordered by node count (descending), ties broken by larger overlap
// with rho_1, then lexicographically by gate id. rho_1 is the lexicographically
// smallest of the longest paths. Throws NumericalError if the count exceeds cap.
struct PathSet {
    std::vector<Path> paths;
    int n_critical = 0;  // number of paths with the maximal node count
};
PathSet enumerate_paths(const LogicNetwork& net, const PathSetOptions& opt = {});

struct Partition {
    std::vector<int> gates;  // in path order (input side first)
    bool inside = false;     // lies on the critical set
};
// Minimal partition of a path into maximal runs inside / outside the critical set.
// Returned with index 0 = output-side partition (rho_{n,1}).
std::vector<Partition> partition_path(const Path& path, const std::vector<char>& critical);

}  // namespace spinsc
