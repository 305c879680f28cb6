#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinsc/netlist.hpp"

namespace spinsc {

// Incremental network construction with the bookkeeping the arithmetic
// generators share: known complements (so a full adder can reuse an existing
// inverted carry), constant folding, and a tag prefix per region.
class NetBuilder {
public:
    explicit NetBuilder(LogicNetwork& net) : net_(net) {}

    LogicNetwork& net() { return net_; }

    Fanin input(const std::string& name);
    // Adds `name` and a complement input `name_n`; returns the true literal.
    Fanin input_with_complement(const std::string& name);

    Fanin gate(GateKind kind, std::vector<Fanin> fanins, std::vector<std::string> tags);
    // Reuses a known complement or folds constants before adding an INV.
    Fanin invert(Fanin a, const std::vector<std::string>& tags);
    Fanin and2(Fanin a, Fanin b, const std::vector<std::string>& tags);
    Fanin nand2(Fanin a, Fanin b, const std::vector<std::string>& tags);

    void set_complement(Fanin a, Fanin b);
    std::optional<Fanin> complement(Fanin a) const;

    struct AddOut {
        Fanin sum;
        Fanin carry;
    };
    // Minority-gate full adder: m1 = MIN(a,b,C) = not carry, i1 = INV(m1) = carry,
    // m2 = MIN(a,b,not C), m3 = MIN(i1, not C, m2) = sum. C is chosen among the
    // inputs with a known complement; with two or more constant inputs the adder
    // collapses to wires or a single inverter.
    AddOut full_adder(Fanin a, Fanin b, Fanin c, const std::vector<std::string>& tags);

    // Sum of columns of weighted bits modulo 2^width, reduced with 3:2 adders
    // in Wallace stages and a final ripple stage. Returns width result bits (LSB first).
    std::vector<Fanin> reduce_heap(std::vector<std::vector<Fanin>> columns, int width,
                                   const std::vector<std::string>& tags);

    // Two's-complement ripple addition of equal-length words (mod 2^width).
    std::vector<Fanin> ripple_add(const std::vector<Fanin>& a, const std::vector<Fanin>& b, Fanin cin,
                                  const std::vector<std::string>& tags);

    // Attach an output; literals that are not gates are driven through a BUF.
    void output(const std::string& name, Fanin f, int bit, bool sign, const std::vector<std::string>& tags,
                const std::string& group = "");

    int full_adder_count() const { return fa_count_; }

private:
    LogicNetwork& net_;
    std::map<std::pair<int, int>, Fanin> comp_;
    int fa_count_ = 0;
    static std::pair<int, int> key(Fanin f) { return {int(f.src), f.index}; }
};

enum class BlockKind { RCA, BWM, CSA };

struct BlockDescriptor {
    BlockKind kind = BlockKind::RCA;
    int width = 0;       // RCA/CSA word width, 8 for BWM
    int n_operands = 0;  // CSA only
    int rpe_bits = 0;    // BWM only
    LogicNetwork network;  // tap_map lives in network.taps
};

// Unsigned width-bit ripple-carry adder: inputs a*, b*, cin (+ complement cin_n),
// outputs s0..s{width-1} and the carry out at bit `width`.
BlockDescriptor build_rca(int width);

// Signed 8x8 multiplier. Tap "rpe" is the 10-bit signed product of the 5-bit
// truncated operands (a >> 3) * (b >> 3); the full product is 64*rpe + cross
// and low partial products.
BlockDescriptor build_bwm(int rpe_bits = 5);

// Serial carry-save accumulation of n signed operands (operand_width bits each)
// into a word wide enough to never overflow, followed by a ripple stage.
BlockDescriptor build_csa(int n_operands, int operand_width, bool serial = true);
int csa_width(int n_operands, int operand_width);

// Stable ascending permutation of weight indices.
std::vector<int> reorder_dimensions(const std::vector<int>& weights);

// Bits of a two's-complement word, LSB first.
std::vector<std::uint8_t> to_bits(std::int64_t v, int width);

// Multiplier building blocks reused by svm_bench. Operands are LSB-first literal
// vectors interpreted as signed two's complement. Returns product columns.
void add_signed_product(NetBuilder& b, std::vector<std::vector<Fanin>>& columns, std::int64_t& constant,
                        const std::vector<Fanin>& x, const std::vector<Fanin>& y, int shift, int width,
                        const std::vector<std::string>& tags);
// Folds a constant into the heap columns (mod 2^width).
void add_constant(std::vector<std::vector<Fanin>>& columns, std::int64_t constant, int width);

struct BwmWires {
    std::vector<Fanin> product;  // 16 bits, signed
    std::vector<Fanin> rpe;      // 2*rpe_bits bits, signed, weight 2^(2*(8-rpe_bits))
};
BwmWires wire_bwm(NetBuilder& b, const std::vector<Fanin>& x, const std::vector<Fanin>& y, int rpe_bits,
                  const std::vector<std::string>& tags);

}  // namespace spinsc
