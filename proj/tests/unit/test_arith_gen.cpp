#include <doctest.h>

#include <algorithm>

#include "spinsc/arith_gen.hpp"
#include "spinsc/rng.hpp"

using namespace spinsc;

namespace {

void set_word(const LogicNetwork& net, std::vector<std::uint8_t>& in, const std::string& prefix, std::int64_t v, int bits) {
    for (int k = 0; k < bits; ++k) in[std::size_t(net.input_index(prefix + std::to_string(k)))] = std::uint8_t((v >> k) & 1);
}

std::int64_t read_signed(const std::vector<Fanin>& word, const std::vector<std::uint8_t>& gates,
                         const std::vector<std::uint8_t>& in) {
    std::int64_t v = 0;
    for (std::size_t k = 0; k < word.size(); ++k) {
        const Fanin& f = word[k];
        const std::uint8_t b = f.is_gate() ? gates[std::size_t(f.index)]
                               : f.src == Fanin::Src::Input ? in[std::size_t(f.index)] : std::uint8_t(f.index);
        if (b) v += k + 1 == word.size() ? -(std::int64_t(1) << k) : (std::int64_t(1) << k);
    }
    return v;
}

}  // namespace

TEST_CASE("full adder truth table (rca width 1)") {
    const auto d = build_rca(1);
    const LogicNetwork& net = d.network;
    CHECK(net.size() == 4);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) {
                std::vector<std::uint8_t> in(net.inputs.size(), 0);
                in[std::size_t(net.input_index("a0"))] = std::uint8_t(a);
                in[std::size_t(net.input_index("b0"))] = std::uint8_t(b);
                in[std::size_t(net.input_index("cin"))] = std::uint8_t(c);
                net.complete_inputs(in);
                CHECK(net.decode(eval_noiseless(net, in)) == a + b + c);
            }
    for (const auto& g : net.gates) CHECK((g.has_tag("m1") || g.has_tag("m2") || g.has_tag("m3") || g.has_tag("i1")));
}

TEST_CASE("Baugh-Wooley multiplier: exhaustive signed products") {
    const auto d = build_bwm();
    const LogicNetwork& net = d.network;
    CHECK(net.validate().empty());
    std::vector<std::uint8_t> in(net.inputs.size(), 0);
    for (int a = -128; a < 128; ++a)
        for (int b = -128; b < 128; ++b) {
            set_word(net, in, "a", a, 8);
            set_word(net, in, "b", b, 8);
            auto full = in;
            net.complete_inputs(full);
            REQUIRE(net.decode(eval_noiseless(net, full)) == a * b);
        }
}

TEST_CASE("RPE tap is exact on non-negative operands") {
    const auto d = build_bwm(5);
    const LogicNetwork& net = d.network;
    const auto& tap = d.network.taps.at("rpe");
    CHECK(tap.size() == 10);
    std::vector<std::uint8_t> in(net.inputs.size(), 0);
    for (int a = 0; a < 128; ++a)
        for (int b = 0; b < 128; ++b) {
            set_word(net, in, "a", a, 8);
            set_word(net, in, "b", b, 8);
            auto full = in;
            net.complete_inputs(full);
            const auto g = eval_gates(net, full);
            REQUIRE(read_signed(tap, g, full) == (a >> 3) * (b >> 3));
        }
    for (const auto& g : net.gates)
        if (g.has_tag("rpe")) CHECK(!g.tags.empty());
}

TEST_CASE("serial CSA equals the integer sum") {
    const int n = 10, w = 16;
    const auto d = build_csa(n, w, true);
    const LogicNetwork& net = d.network;
    CHECK(d.width == csa_width(n, w));
    std::vector<std::uint8_t> in(net.inputs.size(), 0);
    for (std::uint64_t t = 0; t < 2000; ++t) {
        std::int64_t want = 0;
        for (int i = 0; i < n; ++i) {
            const auto v = std::int64_t(hash_draw(77, std::uint64_t(i), t) % 65536) - 32768;
            want += v;
            set_word(net, in, "x" + std::to_string(i) + "_", v, w);
        }
        auto full = in;
        net.complete_inputs(full);
        REQUIRE(net.decode(eval_noiseless(net, full)) == want);
    }
    const auto two = build_csa(2, 4, true);
    CHECK(two.network.validate().empty());
    CHECK_THROWS(build_csa(1, 4, true));
}

TEST_CASE("reorder_dimensions is a stable ascending sort") {
    CHECK(reorder_dimensions({3, 1, 2}) == std::vector<int>{1, 2, 0});
    CHECK(reorder_dimensions({5, 5, 5}) == std::vector<int>{0, 1, 2});
    std::vector<int> w;
    for (std::uint64_t k = 0; k < 200; ++k) w.push_back(int(hash_draw(3, 0, k) % 255) - 127);
    const auto p = reorder_dimensions(w);
    for (std::size_t k = 1; k < p.size(); ++k) CHECK(w[std::size_t(p[k - 1])] <= w[std::size_t(p[k])]);
}

TEST_CASE("generated blocks validate") {
    CHECK(build_rca(15).network.validate().empty());
    CHECK(build_bwm().network.validate().empty());
    CHECK(build_csa(6, 8, true).network.validate().empty());
    CHECK(to_bits(5, 4) == std::vector<std::uint8_t>{1, 0, 1, 0});
}
