#include <doctest.h>

#include <algorithm>

#include "spinsc/arith_gen.hpp"
#include "spinsc/netlist.hpp"
#include "test_util.hpp"

using namespace spinsc;

namespace {

bool has_code(const std::vector<Diagnostic>& d, const std::string& code) {
    return std::any_of(d.begin(), d.end(), [&](const Diagnostic& x) { return x.code == code; });
}

LogicNetwork chain(int n) {
    LogicNetwork net;
    net.add_input("x");
    Fanin prev = Fanin::input(0);
    for (int g = 0; g < n; ++g) prev = Fanin::gate(net.add_gate(GateKind::BUF, {prev}));
    net.add_output("y", n - 1, 0);
    return net;
}

// g0 -> g1 -> g4 -> g3 and g0 -> g2 -> g3: the off-branch g2 has one unit of slack.
LogicNetwork diamond() {
    LogicNetwork net;
    net.add_input("x");
    net.add_input("z");
    net.add_gate(GateKind::BUF, {Fanin::input(0)});
    net.add_gate(GateKind::BUF, {Fanin::gate(0)});
    net.add_gate(GateKind::BUF, {Fanin::gate(0)});
    net.add_gate(GateKind::MAJ3, {Fanin::gate(4), Fanin::gate(2), Fanin::input(1)});
    net.add_gate(GateKind::BUF, {Fanin::gate(1)});
    net.add_output("y", 3, 0);
    return net;
}

}  // namespace

TEST_CASE("validate: valid inverter, arity and cycle errors") {
    LogicNetwork ok;
    ok.add_input("a");
    ok.add_gate(GateKind::INV, {Fanin::input(0)});
    ok.add_output("y", 0, 0);
    CHECK(ok.validate().empty());

    LogicNetwork arity;
    arity.add_input("a");
    arity.add_gate(GateKind::MAJ3, {Fanin::input(0), Fanin::input(0)});
    arity.add_output("y", 0, 0);
    CHECK(has_code(arity.validate(), "arity"));

    LogicNetwork loop;
    loop.add_input("a");
    loop.add_gate(GateKind::INV, {Fanin::gate(0)});
    loop.add_output("y", 0, 0);
    CHECK(has_code(loop.validate(), "cycle"));
    CHECK_THROWS(loop.require_valid());
}

TEST_CASE("majority identities") {
    CHECK(gate_function(GateKind::MAJ3, 1, 1, 0) == 1);
    for (std::uint8_t a = 0; a < 2; ++a)
        for (std::uint8_t b = 0; b < 2; ++b) {
            CHECK(gate_function(GateKind::MAJ3, a, b, 0) == (a & b));
            CHECK(gate_function(GateKind::MAJ3, a, b, 1) == (a | b));
            CHECK(gate_function(GateKind::MIN3, a, b, 1) == !(a | b));
        }
}

TEST_CASE("eval_noiseless: rca(n) is integer addition for n <= 6") {
    for (int n = 1; n <= 6; ++n) {
        const auto d = build_rca(n);
        const LogicNetwork& net = d.network;
        const int ia = net.input_index("a0"), ib = net.input_index("b0"), ic = net.input_index("cin");
        for (int a = 0; a < (1 << n); ++a)
            for (int b = 0; b < (1 << n); ++b)
                for (int c = 0; c < 2; ++c) {
                    std::vector<std::uint8_t> in(net.inputs.size(), 0);
                    for (int k = 0; k < n; ++k) {
                        in[std::size_t(ia + k)] = std::uint8_t((a >> k) & 1);
                        in[std::size_t(net.input_index("b" + std::to_string(k)))] = std::uint8_t((b >> k) & 1);
                    }
                    in[std::size_t(ic)] = std::uint8_t(c);
                    net.complete_inputs(in);
                    REQUIRE(net.decode(eval_noiseless(net, in)) == a + b + c);
                }
        (void)ib;
    }
}

TEST_CASE("critical path summary on a chain and a diamond") {
    const LogicNetwork c = chain(5);
    const auto s = critical_path_summary(c, std::vector<double>(5, 1.0));
    CHECK(s.n_cp == 5);
    CHECK(s.t_cp == 5.0);
    const auto mid = io_critical_paths(c, std::vector<double>(5, 1.0), 2);
    CHECK(mid.t_imax == 3.0);
    CHECK(mid.t_omax == 3.0);
    CHECK(io_critical_paths(c, std::vector<double>(5, 1.0), 0).t_imax == 1.0);

    const LogicNetwork d = diamond();
    const auto ds = critical_path_summary(d, std::vector<double>(5, 1.0));
    CHECK(ds.n_cp == 4);
    CHECK(ds.t_cp_avg == doctest::Approx(1.0));
    const auto g2 = io_critical_paths(d, std::vector<double>(5, 1.0), 2);
    CHECK(g2.t_imax == 2.0);
    CHECK(g2.t_omax == 2.0);
}

TEST_CASE("critical path summary equals brute-force enumeration on random DAGs") {
    for (std::uint64_t seed = 1; seed <= 60; ++seed) {
        const LogicNetwork net = testing::random_dag(seed, 4 + int(seed % 17));
        REQUIRE(net.validate().empty());
        std::vector<double> delays(net.size());
        for (std::size_t g = 0; g < delays.size(); ++g) delays[g] = 0.5 + uniform_draw(seed, 9, g);
        double t_best = 0;
        std::size_t n_best = 0;
        for (const auto& p : testing::brute_paths(net)) {
            double t = 0;
            for (int g : p) t += delays[std::size_t(g)];
            t_best = std::max(t_best, t);
            n_best = std::max(n_best, p.size());
        }
        const auto s = critical_path_summary(net, delays);
        CHECK(s.t_cp == doctest::Approx(t_best).epsilon(1e-12));
        CHECK(std::size_t(s.n_cp) == n_best);
    }
}

TEST_CASE("path set ordering: node count descending, then overlap with the first path") {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const LogicNetwork net = testing::random_dag(seed, 12);
        const PathSet ps = enumerate_paths(net);
        REQUIRE(!ps.paths.empty());
        const auto& first = ps.paths.front();
        auto overlap = [&](const Path& p) {
            return std::count_if(p.begin(), p.end(), [&](int g) { return std::find(first.begin(), first.end(), g) != first.end(); });
        };
        for (std::size_t k = 1; k < ps.paths.size(); ++k) {
            const auto& a = ps.paths[k - 1];
            const auto& b = ps.paths[k];
            CHECK(a.size() >= b.size());
            if (a.size() == b.size()) CHECK(overlap(a) >= overlap(b));
        }
    }
}

TEST_CASE("partition_path: minimal inside/outside runs") {
    const Path p = {0, 1, 2, 3, 4};
    CHECK(partition_path(p, {1, 1, 1, 1, 1}).size() == 1);
    const auto parts = partition_path(p, {1, 1, 0, 1, 1});
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].inside);
    CHECK(!parts[1].inside);
    CHECK(parts[2].inside);
    for (std::size_t k = 1; k < parts.size(); ++k) CHECK(parts[k].inside != parts[k - 1].inside);
}

TEST_CASE("netlist JSON round trip is byte identical") {
    const auto d = build_rca(4);
    const std::string a = netlist_to_json(d.network);
    const LogicNetwork back = parse_netlist(a);
    CHECK(netlist_to_json(back) == a);
    CHECK(back.size() == d.network.size());
    CHECK_THROWS(parse_netlist("{\"gates\": 3}"));
}
