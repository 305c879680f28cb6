#include <algorithm>
#include <cmath>
#include <limits>

#include "spinsc/errors.hpp"
#include "spinsc/netlist.hpp"

namespace spinsc {

namespace {

void check_delays(const LogicNetwork& net, const std::vector<double>& delays) {
    if (delays.size() != net.gates.size())
        throw ConfigError("netlist", "delay vector has " + std::to_string(delays.size()) + " entries, network has " +
                                         std::to_string(net.gates.size()) + " gates");
}

// Predecessors that carry delay.
template <class F>
void for_timed_fanins(const LogicNetwork& net, int g, F&& f) {
    for (const Fanin& fi : net.gates[g].fanins)
        if (fi.is_gate() && net.timed(fi.index)) f(fi.index);
}

}  // namespace

TimingTables timing_tables(const LogicNetwork& net, const std::vector<double>& delays) {
    check_delays(net, delays);
    const int n = int(net.gates.size());
    const auto& order = net.topo_order();
    const auto& fo = net.fanouts();
    const auto& po = net.is_po_node();
    TimingTables t;
    t.arrival.assign(n, kNoPath);
    t.departure.assign(n, kNoPath);
    t.cnt_in.assign(n, -1);
    t.cnt_out.assign(n, -1);
    for (int g : order) {
        if (!net.timed(g)) continue;
        double a = net.is_pi_node(g) ? 0.0 : kNoPath;
        int c = net.is_pi_node(g) ? 0 : -1;
        for_timed_fanins(net, g, [&](int f) {
            a = std::max(a, t.arrival[f]);
            if (t.cnt_in[f] >= 0) c = std::max(c, t.cnt_in[f]);
        });
        if (a != kNoPath) t.arrival[g] = a + delays[g];
        if (c >= 0) t.cnt_in[g] = c + 1;
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int g = *it;
        if (!net.timed(g)) continue;
        double d = po[g] ? 0.0 : kNoPath;
        int c = po[g] ? 0 : -1;
        for (int s : fo[g]) {
            if (!net.timed(s)) continue;
            d = std::max(d, t.departure[s]);
            if (t.cnt_out[s] >= 0) c = std::max(c, t.cnt_out[s]);
        }
        if (d != kNoPath) t.departure[g] = d + delays[g];
        if (c >= 0) t.cnt_out[g] = c + 1;
    }
    return t;
}

TimingSummary critical_path_summary(const LogicNetwork& net, const std::vector<double>& delays) {
    auto t = timing_tables(net, delays);
    const int n = int(net.gates.size());
    const auto& po = net.is_po_node();
    TimingSummary s;
    int end = -1;
    for (int g = 0; g < n; ++g) {
        if (!net.timed(g) || !po[g]) continue;
        s.n_cp = std::max(s.n_cp, t.cnt_in[g]);
        if (t.arrival[g] != kNoPath && (end < 0 || t.arrival[g] > s.t_cp)) {
            s.t_cp = t.arrival[g];
            end = g;
        }
    }
    if (s.n_cp > 0) s.t_cp_avg = s.t_cp / s.n_cp;

    // Number of paths that reach n_cp nodes: ways[g] counts PI->g chains of cnt_in[g] nodes.
    std::vector<std::uint64_t> ways(n, 0);
    constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
    for (int g : net.topo_order()) {
        if (!net.timed(g) || t.cnt_in[g] < 0) continue;
        std::uint64_t w = (net.is_pi_node(g) && t.cnt_in[g] == 1) ? 1 : 0;
        for_timed_fanins(net, g, [&](int f) {
            if (t.cnt_in[f] + 1 == t.cnt_in[g]) w = (kSat - w < ways[f]) ? kSat : w + ways[f];
        });
        ways[g] = w;
    }
    for (int g = 0; g < n; ++g)
        if (net.timed(g) && po[g] && t.cnt_in[g] == s.n_cp)
            s.critical_path_count = (kSat - s.critical_path_count < ways[g]) ? kSat : s.critical_path_count + ways[g];

    // Witness: walk back along the arrival argmax.
    for (int g = end; g >= 0;) {
        s.witness.push_back(g);
        double want = t.arrival[g] - delays[g];
        int prev = -1;
        for_timed_fanins(net, g, [&](int f) {
            if (prev < 0 && t.arrival[f] != kNoPath && std::abs(t.arrival[f] - want) <= 1e-12 * std::max(1.0, std::abs(want)))
                prev = f;
        });
        if (prev < 0) break;
        g = prev;
    }
    std::reverse(s.witness.begin(), s.witness.end());
    return s;
}

IoCritical io_critical_paths(const LogicNetwork& net, const std::vector<double>& delays, int g, int min_nodes) {
    check_delays(net, delays);
    if (g < 0 || g >= int(net.gates.size())) throw ConfigError("netlist", "no gate " + std::to_string(g));
    if (!net.timed(g)) throw DomainError("netlist", "gate " + std::to_string(g) + " is a constant and lies on no path");
    const int n = int(net.gates.size());
    const auto& order = net.topo_order();
    const auto& fo = net.fanouts();
    const auto& po = net.is_po_node();
    IoCritical r;

    if (min_nodes <= 0) {
        auto t = timing_tables(net, delays);
        if (t.arrival[g] == kNoPath || t.departure[g] == kNoPath)
            throw DomainError("netlist", "gate " + std::to_string(g) + " is unreachable from inputs or outputs");
        r.t_imax = t.arrival[g];
        r.t_omax = t.departure[g];
        for (int x = g; x >= 0;) {
            r.input_path.push_back(x);
            double want = t.arrival[x] - delays[x];
            int prev = -1;
            if (!(net.is_pi_node(x) && want <= 0.0))
                for_timed_fanins(net, x, [&](int f) {
                    if (prev < 0 && t.arrival[f] != kNoPath && std::abs(t.arrival[f] - want) <= 1e-12 * std::max(1.0, want))
                        prev = f;
                });
            x = prev;
        }
        std::reverse(r.input_path.begin(), r.input_path.end());
        for (int x = g; x >= 0;) {
            r.output_path.push_back(x);
            double want = t.departure[x] - delays[x];
            int next = -1;
            if (!(po[x] && want <= 0.0))
                for (int s : fo[x])
                    if (next < 0 && net.timed(s) && t.departure[s] != kNoPath &&
                        std::abs(t.departure[s] - want) <= 1e-12 * std::max(1.0, want))
                        next = s;
            x = next;
        }
        return r;
    }

    // Restricted to the family of primary paths with at least min_nodes gates.
    // in[k][x]: max delay of PI->x chains with exactly k+1 nodes; out[k][x] likewise to a PO.
    auto t = timing_tables(net, delays);
    int kmax = 0;
    for (int x = 0; x < n; ++x) kmax = std::max({kmax, t.cnt_in[x], t.cnt_out[x]});
    std::vector<std::vector<double>> in(kmax, std::vector<double>(n, kNoPath)), out = in;
    for (int x : order) {
        if (!net.timed(x)) continue;
        if (net.is_pi_node(x)) in[0][x] = delays[x];
        for_timed_fanins(net, x, [&](int f) {
            for (int k = 1; k < kmax; ++k)
                if (in[k - 1][f] != kNoPath) in[k][x] = std::max(in[k][x], in[k - 1][f] + delays[x]);
        });
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int x = *it;
        if (!net.timed(x)) continue;
        if (po[x]) out[0][x] = delays[x];
        for (int s : fo[x]) {
            if (!net.timed(s)) continue;
            for (int k = 1; k < kmax; ++k)
                if (out[k - 1][s] != kNoPath) out[k][x] = std::max(out[k][x], out[k - 1][s] + delays[x]);
        }
    }
    int a_best = -1, b_best = -1;
    for (int a = 0; a < kmax; ++a) {
        if (in[a][g] == kNoPath) continue;
        for (int b = 0; b < kmax; ++b) {
            if (out[b][g] == kNoPath || a + b + 1 < min_nodes) continue;
            if (a_best < 0 || in[a][g] > r.t_imax) r.t_imax = in[a][g], a_best = a;
            if (b_best < 0 || out[b][g] > r.t_omax) r.t_omax = out[b][g], b_best = b;
        }
    }
    if (a_best < 0) throw DomainError("netlist", "gate " + std::to_string(g) + " lies on no path of the requested family");
    // Witnesses by backtracking through the layered tables.
    for (int x = g, k = a_best; x >= 0 && k >= 0; --k) {
        r.input_path.push_back(x);
        if (k == 0) break;
        int prev = -1;
        double want = in[k][x] - delays[x];
        for_timed_fanins(net, x, [&](int f) {
            if (prev < 0 && in[k - 1][f] != kNoPath && std::abs(in[k - 1][f] - want) <= 1e-12 * std::max(1.0, want)) prev = f;
        });
        x = prev;
    }
    std::reverse(r.input_path.begin(), r.input_path.end());
    for (int x = g, k = b_best; x >= 0 && k >= 0; --k) {
        r.output_path.push_back(x);
        if (k == 0) break;
        int next = -1;
        double want = out[k][x] - delays[x];
        for (int s : fo[x])
            if (next < 0 && net.timed(s) && out[k - 1][s] != kNoPath &&
                std::abs(out[k - 1][s] - want) <= 1e-12 * std::max(1.0, want))
                next = s;
        x = next;
    }
    return r;
}

std::uint64_t count_primary_paths(const LogicNetwork& net) {
    const int n = int(net.gates.size());
    const auto& order = net.topo_order();
    const auto& fo = net.fanouts();
    const auto& po = net.is_po_node();
    constexpr auto kSat = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> c(n, 0);
    std::uint64_t total = 0;
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int g = *it;
        if (!net.timed(g)) continue;
        std::uint64_t v = po[g] ? 1 : 0;
        for (int s : fo[g])
            if (net.timed(s)) v = (kSat - v < c[s]) ? kSat : v + c[s];
        c[g] = v;
        if (net.is_pi_node(g)) total = (kSat - total < v) ? kSat : total + v;
    }
    return total;
}

Path first_critical_path(const LogicNetwork& net) {
    std::vector<double> ones(net.gates.size(), 1.0);
    auto t = timing_tables(net, ones);
    const int n = int(net.gates.size());
    int n_cp = 0;
    for (int g = 0; g < n; ++g)
        if (net.timed(g) && net.is_pi_node(g)) n_cp = std::max(n_cp, t.cnt_out[g]);
    Path p;
    for (int g = 0; g < n && p.empty(); ++g)
        if (net.timed(g) && net.is_pi_node(g) && t.cnt_out[g] == n_cp) p.push_back(g);
    const auto& fo = net.fanouts();
    while (!p.empty() && int(p.size()) < n_cp) {
        int need = n_cp - int(p.size());
        int best = -1;
        for (int s : fo[p.back()])
            if (net.timed(s) && t.cnt_out[s] == need && (best < 0 || s < best)) best = s;
        if (best < 0) break;
        p.push_back(best);
    }
    return p;
}

std::vector<int> min_reachable_output_bit(const LogicNetwork& net) {
    const int n = int(net.gates.size());
    std::vector<int> mb(n, std::numeric_limits<int>::max());
    for (const auto& o : net.outputs) mb[o.gate] = std::min(mb[o.gate], o.bit);
    const auto& order = net.topo_order();
    const auto& fo = net.fanouts();
    for (auto it = order.rbegin(); it != order.rend(); ++it)
        for (int s : fo[*it]) mb[*it] = std::min(mb[*it], mb[s]);
    return mb;
}

PathSet enumerate_paths(const LogicNetwork& net, const PathSetOptions& opt) {
    const std::uint64_t count = count_primary_paths(net);
    if (count > opt.cap)
        throw NumericalError("netlist", "network has " + std::to_string(count) + " primary paths, above the enumeration cap of " +
                                            std::to_string(opt.cap) + "; use the slack-absorption fallback");
    const int n = int(net.gates.size());
    const auto& fo = net.fanouts();
    const auto& po = net.is_po_node();
    std::vector<std::vector<int>> succ(n);
    for (int g = 0; g < n; ++g) {
        for (int s : fo[g])
            if (net.timed(s)) succ[g].push_back(s);
        std::sort(succ[g].begin(), succ[g].end());
        succ[g].erase(std::unique(succ[g].begin(), succ[g].end()), succ[g].end());
    }
    PathSet ps;
    ps.paths.reserve(std::size_t(count));
    Path cur;
    // Iterative DFS: (gate, next successor index).
    std::vector<std::pair<int, std::size_t>> stack;
    for (int s = 0; s < n; ++s) {
        if (!net.is_pi_node(s)) continue;
        stack.push_back({s, 0});
        cur.push_back(s);
        if (po[s]) ps.paths.push_back(cur);
        while (!stack.empty()) {
            auto& [g, k] = stack.back();
            if (k < succ[g].size()) {
                int nx = succ[g][k++];
                stack.push_back({nx, 0});
                cur.push_back(nx);
                if (po[nx]) ps.paths.push_back(cur);
            } else {
                stack.pop_back();
                cur.pop_back();
            }
        }
    }
    if (ps.paths.empty()) return ps;
    std::size_t longest = 0;
    for (const auto& p : ps.paths) longest = std::max(longest, p.size());
    const Path* rho1 = nullptr;
    for (const auto& p : ps.paths)
        if (p.size() == longest && (!rho1 || p < *rho1)) rho1 = &p;
    std::vector<char> in1(n, 0);
    for (int g : *rho1) in1[g] = 1;
    std::vector<int> overlap(ps.paths.size());
    for (std::size_t i = 0; i < ps.paths.size(); ++i)
        for (int g : ps.paths[i]) overlap[i] += in1[g];
    std::vector<std::size_t> idx(ps.paths.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& pa = ps.paths[a];
        const auto& pb = ps.paths[b];
        if (pa.size() != pb.size()) return pa.size() > pb.size();
        if (overlap[a] != overlap[b]) return overlap[a] > overlap[b];
        return pa < pb;
    });
    std::vector<Path> sorted;
    sorted.reserve(idx.size());
    for (auto i : idx) sorted.push_back(std::move(ps.paths[i]));
    ps.paths = std::move(sorted);
    for (const auto& p : ps.paths)
        if (p.size() == longest) ++ps.n_critical;
    return ps;
}

std::vector<Partition> partition_path(const Path& path, const std::vector<char>& critical) {
    std::vector<Partition> parts;
    for (int g : path) {
        bool in = g >= 0 && std::size_t(g) < critical.size() && critical[g];
        if (parts.empty() || parts.back().inside != in) parts.push_back({{}, in});
        parts.back().gates.push_back(g);
    }
    std::reverse(parts.begin(), parts.end());
    return parts;
}

}  // namespace spinsc
