#include "spinsc/arith_gen.hpp"

#include <algorithm>
#include <numeric>

#include "spinsc/errors.hpp"

namespace spinsc {

namespace {

std::vector<std::string> with(std::vector<std::string> tags, std::initializer_list<std::string> more) {
    tags.insert(tags.begin(), more);
    return tags;
}

bool is_const(Fanin f) { return f.src == Fanin::Src::Const; }

}  // namespace

Fanin NetBuilder::input(const std::string& name) {
    return Fanin::input(net_.add_input(name));
}

Fanin NetBuilder::input_with_complement(const std::string& name) {
    int t = net_.add_input(name);
    int c = net_.add_input(name + "_n", t);
    set_complement(Fanin::input(t), Fanin::input(c));
    return Fanin::input(t);
}

Fanin NetBuilder::gate(GateKind kind, std::vector<Fanin> fanins, std::vector<std::string> tags) {
    return Fanin::gate(net_.add_gate(kind, std::move(fanins), std::move(tags)));
}

void NetBuilder::set_complement(Fanin a, Fanin b) {
    comp_[key(a)] = b;
    comp_[key(b)] = a;
}

std::optional<Fanin> NetBuilder::complement(Fanin a) const {
    if (is_const(a)) return Fanin::constant(a.index ^ 1);
    auto it = comp_.find(key(a));
    if (it == comp_.end()) return std::nullopt;
    return it->second;
}

Fanin NetBuilder::invert(Fanin a, const std::vector<std::string>& tags) {
    if (auto c = complement(a)) return *c;
    Fanin r = gate(GateKind::INV, {a}, with(tags, {"inv"}));
    set_complement(a, r);
    return r;
}

Fanin NetBuilder::and2(Fanin a, Fanin b, const std::vector<std::string>& tags) {
    if (is_const(a)) std::swap(a, b);
    if (is_const(b)) return b.index ? a : Fanin::constant(0);
    return gate(GateKind::MAJ3, {a, b, Fanin::constant(0)}, with(tags, {"pp"}));
}

Fanin NetBuilder::nand2(Fanin a, Fanin b, const std::vector<std::string>& tags) {
    if (is_const(a)) std::swap(a, b);
    if (is_const(b)) return b.index ? invert(a, tags) : Fanin::constant(1);
    return gate(GateKind::MIN3, {a, b, Fanin::constant(0)}, with(tags, {"pp"}));
}

NetBuilder::AddOut NetBuilder::full_adder(Fanin a, Fanin b, Fanin c, const std::vector<std::string>& tags) {
    std::vector<Fanin> vars;
    int k = 0;
    for (Fanin f : {a, b, c}) {
        if (is_const(f)) k += f.index;
        else vars.push_back(f);
    }
    if (vars.empty()) return {Fanin::constant(k & 1), Fanin::constant(k >> 1)};
    if (vars.size() == 1) {
        Fanin x = vars[0];
        if (k == 0) return {x, Fanin::constant(0)};
        if (k == 2) return {x, Fanin::constant(1)};
        return {invert(x, tags), x};
    }
    Fanin C, nC;
    std::vector<Fanin> ab;
    if (vars.size() == 2) {
        C = Fanin::constant(k);
        nC = Fanin::constant(k ^ 1);
        ab = vars;
    } else {
        int pick = -1;
        for (int i = 2; i >= 0; --i)
            if (complement(vars[i])) {
                pick = i;
                break;
            }
        if (pick < 0) pick = 2;
        C = vars[pick];
        for (int i = 0; i < 3; ++i)
            if (i != pick) ab.push_back(vars[i]);
        nC = invert(C, tags);
    }
    const std::string fa = "FA" + std::to_string(fa_count_++);
    Fanin m1 = gate(GateKind::MIN3, {ab[0], ab[1], C}, with(tags, {"m1", fa}));
    Fanin i1 = gate(GateKind::INV, {m1}, with(tags, {"i1", fa}));
    set_complement(m1, i1);
    Fanin m2 = gate(GateKind::MIN3, {ab[0], ab[1], nC}, with(tags, {"m2", fa}));
    Fanin m3 = gate(GateKind::MIN3, {i1, nC, m2}, with(tags, {"m3", fa}));
    return {m3, i1};
}

std::vector<Fanin> NetBuilder::ripple_add(const std::vector<Fanin>& a, const std::vector<Fanin>& b, Fanin cin,
                                          const std::vector<std::string>& tags) {
    if (a.size() != b.size()) throw DomainError("arith_gen", "ripple_add operands differ in width");
    std::vector<Fanin> s;
    Fanin carry = cin;
    for (std::size_t k = 0; k < a.size(); ++k) {
        auto r = full_adder(a[k], b[k], carry, tags);
        s.push_back(r.sum);
        carry = r.carry;
    }
    return s;
}

std::vector<Fanin> NetBuilder::reduce_heap(std::vector<std::vector<Fanin>> cols, int width,
                                           const std::vector<std::string>& tags) {
    cols.resize(width);
    auto height = [&] {
        std::size_t h = 0;
        for (const auto& c : cols) h = std::max(h, c.size());
        return h;
    };
    while (height() > 2) {
        std::vector<std::vector<Fanin>> next(width);
        for (int k = 0; k < width; ++k) {
            const auto& col = cols[k];
            std::size_t i = 0;
            for (; col.size() - i >= 3; i += 3) {
                auto r = full_adder(col[i], col[i + 1], col[i + 2], tags);
                next[k].push_back(r.sum);
                if (k + 1 < width) next[k + 1].push_back(r.carry);
            }
            for (; i < col.size(); ++i) next[k].push_back(col[i]);
        }
        cols = std::move(next);
    }
    std::vector<Fanin> out;
    Fanin carry = Fanin::constant(0);
    for (int k = 0; k < width; ++k) {
        std::vector<Fanin> in = cols[k];
        in.push_back(carry);
        while (in.size() < 3) in.push_back(Fanin::constant(0));
        auto r = full_adder(in[0], in[1], in[2], tags);
        out.push_back(r.sum);
        carry = r.carry;
    }
    return out;
}

void NetBuilder::output(const std::string& name, Fanin f, int bit, bool sign, const std::vector<std::string>& tags,
                        const std::string& group) {
    if (!f.is_gate()) f = gate(GateKind::BUF, {f}, with(tags, {"buf"}));
    net_.add_output(name, f.index, bit, sign, group);
}

// ---------------------------------------------------------------- blocks

std::vector<std::uint8_t> to_bits(std::int64_t v, int width) {
    std::vector<std::uint8_t> b(width);
    for (int k = 0; k < width; ++k) b[k] = std::uint8_t((std::uint64_t(v) >> k) & 1);
    return b;
}

void add_constant(std::vector<std::vector<Fanin>>& columns, std::int64_t constant, int width) {
    if (int(columns.size()) < width) columns.resize(width);
    for (int k = 0; k < width; ++k)
        if ((std::uint64_t(constant) >> k) & 1) columns[k].push_back(Fanin::constant(1));
}

namespace {

// Partial products of x * y into columns. A negative weight term -2^w * p is
// written as 2^w * not(p) - 2^w, the usual Baugh-Wooley complement trick.
void add_product(NetBuilder& b, std::vector<std::vector<Fanin>>& columns, std::int64_t& constant,
                 const std::vector<Fanin>& x, bool x_signed, const std::vector<Fanin>& y, bool y_signed,
                 int shift, int width, const std::vector<std::string>& tags) {
    if (int(columns.size()) < width) columns.resize(width);
    const int n = int(x.size()), m = int(y.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            int w = i + j + shift;
            if (w >= width) continue;  // vanishes modulo 2^width
            bool neg = (x_signed && i == n - 1) != (y_signed && j == m - 1);
            if (neg) {
                columns[w].push_back(b.nand2(x[i], y[j], tags));
                constant -= std::int64_t(1) << w;
            } else {
                columns[w].push_back(b.and2(x[i], y[j], tags));
            }
        }
}

}  // namespace

void add_signed_product(NetBuilder& b, std::vector<std::vector<Fanin>>& columns, std::int64_t& constant,
                        const std::vector<Fanin>& x, const std::vector<Fanin>& y, int shift, int width,
                        const std::vector<std::string>& tags) {
    add_product(b, columns, constant, x, true, y, true, shift, width, tags);
}

BwmWires wire_bwm(NetBuilder& b, const std::vector<Fanin>& x, const std::vector<Fanin>& y, int rpe_bits,
                  const std::vector<std::string>& tags) {
    if (x.size() != 8 || y.size() != 8) throw DomainError("arith_gen", "the multiplier is fixed at 8x8");
    if (rpe_bits < 2 || rpe_bits > 8) throw DomainError("arith_gen", "rpe_bits must lie in [2, 8]");
    const int lo = 8 - rpe_bits;
    std::vector<Fanin> xh(x.begin() + lo, x.end()), yh(y.begin() + lo, y.end());
    std::vector<Fanin> xl(x.begin(), x.begin() + lo), yl(y.begin(), y.begin() + lo);

    // High sub-array: the embedded estimator product (a >> lo) * (b >> lo).
    BwmWires w;
    {
        const int hw = 2 * rpe_bits;
        std::vector<std::vector<Fanin>> cols(hw);
        std::int64_t c = 0;
        auto t = with(tags, {"rpe"});
        add_product(b, cols, c, xh, true, yh, true, 0, hw, t);
        add_constant(cols, c, hw);
        w.rpe = b.reduce_heap(std::move(cols), hw, t);
    }
    // Full product = 2^(2 lo) * rpe + 2^lo * (xh*yl + xl*yh) + xl*yl  (mod 2^16).
    std::vector<std::vector<Fanin>> cols(16);
    std::int64_t c = 0;
    for (std::size_t k = 0; k < w.rpe.size(); ++k)
        if (2 * lo + int(k) < 16) cols[2 * lo + k].push_back(w.rpe[k]);
    add_product(b, cols, c, xh, true, yl, false, lo, 16, tags);
    add_product(b, cols, c, xl, false, yh, true, lo, 16, tags);
    add_product(b, cols, c, xl, false, yl, false, 0, 16, tags);
    add_constant(cols, c, 16);
    w.product = b.reduce_heap(std::move(cols), 16, tags);
    return w;
}

BlockDescriptor build_rca(int width) {
    if (width < 1) throw DomainError("arith_gen", "RCA width must be at least 1");
    BlockDescriptor d;
    d.kind = BlockKind::RCA;
    d.width = width;
    d.network.name = "rca" + std::to_string(width);
    NetBuilder b(d.network);
    std::vector<Fanin> a, bb;
    for (int k = 0; k < width; ++k) a.push_back(b.input("a" + std::to_string(k)));
    for (int k = 0; k < width; ++k) bb.push_back(b.input("b" + std::to_string(k)));
    Fanin carry = b.input_with_complement("cin");
    for (int k = 0; k < width; ++k) {
        auto r = b.full_adder(a[k], bb[k], carry, {});
        b.output("s" + std::to_string(k), r.sum, k, false, {});
        carry = r.carry;
    }
    b.output("cout", carry, width, false, {});
    return d;
}

BlockDescriptor build_bwm(int rpe_bits) {
    BlockDescriptor d;
    d.kind = BlockKind::BWM;
    d.width = 8;
    d.rpe_bits = rpe_bits;
    d.network.name = "bwm8x8";
    NetBuilder b(d.network);
    std::vector<Fanin> x, y;
    for (int k = 0; k < 8; ++k) x.push_back(b.input("a" + std::to_string(k)));
    for (int k = 0; k < 8; ++k) y.push_back(b.input("b" + std::to_string(k)));
    auto w = wire_bwm(b, x, y, rpe_bits, {});
    for (int k = 0; k < 16; ++k) b.output("p" + std::to_string(k), w.product[k], k, k == 15, {});
    d.network.taps["rpe"] = w.rpe;
    d.network.prune();
    return d;
}

int csa_width(int n_operands, int operand_width) {
    int extra = 0;
    while ((1 << extra) < n_operands) ++extra;
    return operand_width + extra;
}

BlockDescriptor build_csa(int n_operands, int operand_width, bool serial) {
    if (n_operands < 2) throw DomainError("arith_gen", "CSA needs at least 2 operands");
    if (operand_width < 1) throw DomainError("arith_gen", "operand width must be positive");
    const int W = csa_width(n_operands, operand_width);
    if (W > 62) throw DomainError("arith_gen", "CSA width " + std::to_string(W) + " exceeds the 62-bit decode range");
    BlockDescriptor d;
    d.kind = BlockKind::CSA;
    d.width = W;
    d.n_operands = n_operands;
    d.network.name = "csa" + std::to_string(n_operands) + "x" + std::to_string(operand_width);
    NetBuilder b(d.network);
    std::vector<std::vector<Fanin>> ops;
    for (int i = 0; i < n_operands; ++i) {
        std::vector<Fanin> op;
        for (int k = 0; k < operand_width; ++k) op.push_back(b.input("x" + std::to_string(i) + "_" + std::to_string(k)));
        while (int(op.size()) < W) op.push_back(op.back());  // sign extension by fanout
        ops.push_back(op);
    }
    std::vector<Fanin> sum;
    if (serial) {
        std::vector<Fanin> s = ops[0], c = ops[1];
        for (int i = 2; i < n_operands; ++i) {
            std::vector<Fanin> ns(W), nc(W, Fanin::constant(0));
            for (int k = 0; k < W; ++k) {
                auto r = b.full_adder(s[k], c[k], ops[i][k], {"row" + std::to_string(i)});
                ns[k] = r.sum;
                if (k + 1 < W) nc[k + 1] = r.carry;
            }
            s = ns;
            c = nc;
        }
        sum = b.ripple_add(s, c, Fanin::constant(0), {"final"});
    } else {
        std::vector<std::vector<Fanin>> cols(W);
        for (const auto& op : ops)
            for (int k = 0; k < W; ++k) cols[k].push_back(op[k]);
        sum = b.reduce_heap(std::move(cols), W, {});
    }
    for (int k = 0; k < W; ++k) b.output("s" + std::to_string(k), sum[k], k, k == W - 1, {});
    d.network.prune();
    return d;
}

std::vector<int> reorder_dimensions(const std::vector<int>& weights) {
    std::vector<int> idx(weights.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return weights[a] < weights[b]; });
    return idx;
}

}  // namespace spinsc
