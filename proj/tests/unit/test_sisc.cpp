#include <doctest.h>

#include <cmath>

#include "spinsc/arith_gen.hpp"
#include "spinsc/sisc.hpp"

using namespace spinsc;

TEST_CASE("fusion parameters") {
    FusionParams p{8, 4};
    CHECK(p.s() == 2);
    CHECK(p.step() == 64);
    CHECK(FusionParams{8, 1}.step() == 256);
    CHECK(FusionParams{8, 3}.s() == 2);
    CHECK_THROWS((FusionParams{8, 0}.validate()));
}

TEST_CASE("fuse: worked examples") {
    const FusionParams p{8, 4};
    auto r = fuse(50, 50, p);
    CHECK(r.eta_hat == 0);
    CHECK(r.y_hat == 50);
    r = fuse(198, 73, p);
    CHECK(r.eta_hat == 128);
    CHECK(r.y_hat == 70);
    // Half-way difference rounds up.
    CHECK(fuse(32, 0, p).eta_hat == 64);
    CHECK(fuse(-32, 0, p).eta_hat == 0);
}

TEST_CASE("fuse: exact correction over the brute-force grid") {
    const FusionParams p{8, 4};
    long cases = 0, exact = 0;
    for (std::int64_t eta : {0, 64, -64, 128, -128})
        for (std::int64_t e = -31; e <= 31; ++e)
            for (std::int64_t y = -100; y <= 100; ++y) {
                ++cases;
                exact += fuse(y + eta, y + e, p).y_hat == y;
            }
    CHECK(exact == cases);
}

TEST_CASE("fuse: translation equivariance and clean idempotence") {
    const FusionParams p{10, 8};
    for (std::int64_t ya = -300; ya <= 300; ya += 7)
        for (std::int64_t ye = -300; ye <= 300; ye += 11)
            for (std::int64_t c : {-1000, -3, 0, 5, 999})
                REQUIRE(fuse(ya + c, ye + c, p).y_hat == fuse(ya, ye, p).y_hat + c);
    for (std::int64_t y = -50; y <= 50; ++y)
        for (std::int64_t e = -63; e <= 63; ++e) REQUIRE(fuse(y, y + e, p).y_hat == y);
}

TEST_CASE("pmf sparsity") {
    ErrorPmf delta;
    for (int k = 0; k < 100; ++k) delta.add(0);
    auto s = pmf_sparsity(delta, 0.01);
    CHECK(s.peak_count == 1);
    CHECK(s.tail_mass == 0.0);
    CHECK(s.sparse_for({8, 1}));

    ErrorPmf flat;
    for (int k = 0; k < 100; ++k) flat.add(k);
    s = pmf_sparsity(flat, 0.02);
    CHECK(s.peak_count == 0);
    CHECK(s.tail_mass == doctest::Approx(1.0));
    CHECK(!s.sparse_for({8, 4}));

    ErrorPmf two;
    for (int k = 0; k < 90; ++k) two.add(0);
    for (int k = 0; k < 10; ++k) two.add(128);
    s = pmf_sparsity(two, 0.05);
    CHECK(s.peak_count == 2);
    CHECK(s.min_separation == 128);
    CHECK(s.sparse_for({8, 2}));
    CHECK(!s.sparse_for({8, 1}));
    CHECK_THROWS(pmf_sparsity(two, 0.7));
}

TEST_CASE("A11 condition check") {
    BitErrorProfile zero;
    zero.rate.assign(8, 0.0);
    auto r = check_sparsity_condition(zero, 3);
    CHECK(!r.pass);
    CHECK(!r.note.empty());

    BitErrorProfile prof;
    prof.rate = {0.001, 0.001, 0.001, 0.001, 0.001, 0.1, 0.1, 0.1};  // LSB first
    r = check_sparsity_condition(prof, 3);
    CHECK(r.pass);
    CHECK(r.margin == doctest::Approx(100.0));
    prof.rate[5] = 0.005;
    CHECK(!check_sparsity_condition(prof, 3).pass);
}

TEST_CASE("compose_sisc: exact estimator and noiseless fusion") {
    // Main block: an 8-bit RCA. The estimator reads the sum outputs themselves.
    const auto rca = build_rca(8);
    LogicNetwork main = rca.network;
    std::vector<Fanin> sum;
    for (const auto& o : main.outputs) sum.push_back(Fanin::gate(o.gate));
    main.taps["sum"] = sum;
    EcConfig ec;
    ec.p_k = 4;
    const SiscArchitecture arch = compose_sisc(main, {{"sum", 0}}, 0, ec);
    CHECK(arch.mb_gates == main.size());
    CHECK(arch.est_gates + arch.fusion_gates + arch.mb_gates == arch.network.size());
    CHECK(arch.region.size() == arch.network.size());
    const LogicNetwork& net = arch.network;
    for (int a = 0; a < 256; a += 5)
        for (int b = 0; b < 256; b += 7) {
            std::vector<std::uint8_t> in(net.inputs.size(), 0);
            for (int k = 0; k < 8; ++k) {
                in[std::size_t(net.input_index("a" + std::to_string(k)))] = std::uint8_t((a >> k) & 1);
                in[std::size_t(net.input_index("b" + std::to_string(k)))] = std::uint8_t((b >> k) & 1);
            }
            net.complete_inputs(in);
            const auto out = eval_noiseless(net, in);
            const auto ya = net.decode(out, "ya");
            CHECK(ya == a + b);
            // The fused word is l = 9 bits two's complement, so sums >= 256 wrap.
            const auto yhat = net.decode(out, "yhat");
            CHECK(yhat == (ya < 256 ? ya : ya - 512));
        }
}
