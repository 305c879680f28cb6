#include "spinsc/assignment_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "spinsc/csv.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

namespace {

std::string join_tags(const std::vector<std::string>& tags) {
    std::string s;
    for (const auto& t : tags) s += (s.empty() ? "" : "|") + t;
    return s;
}

CsvTable assignment_table(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    if (a.size() != net.size()) throw DomainError("delay_shaping", "assignment size does not match the network");
    const auto ann = annotate(net, a, m);
    CsvTable t;
    t.header = {"gate_id", "tag", "delay_factor", "delay_s", "current_A", "energy_J", "epsilon"};
    for (std::size_t g = 0; g < net.size(); ++g) {
        if (!net.timed(int(g))) continue;
        t.rows.push_back({std::to_string(g), join_tags(net.gates[g].tags), fmt_double(a.df[g]), fmt_double(ann[g].delay_s),
                          fmt_double(ann[g].current_A), fmt_double(ann[g].energy_J), fmt_double(ann[g].epsilon)});
    }
    return t;
}

// Stage k of build_rca holds gates 4k (m1), 4k+1 (i1), 4k+2 (m2), 4k+3 (m3).
int rca_gate(int stage, int col) {
    static const int offset[4] = {3, 2, 0, 1};  // m3, m2, m1, i1
    return 4 * stage + offset[col];
}

void check_rca(const LogicNetwork& rca) {
    if (rca.size() % 4 != 0 || rca.size() == 0) throw DomainError("delay_shaping", "network is not a ripple-carry adder from build_rca");
    for (std::size_t k = 0; k < rca.size() / 4; ++k)
        for (int c = 0; c < 4; ++c) {
            static const char* names[4] = {"m3", "m2", "m1", "i1"};
            if (!rca.gates[rca_gate(int(k), c)].has_tag(names[c]))
                throw DomainError("delay_shaping", "gate layout differs from build_rca at stage " + std::to_string(k));
        }
}

}  // namespace

std::string assignment_csv(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    std::ostringstream os;
    write_csv(os, assignment_table(net, a, m));
    return os.str();
}

void save_assignment(const std::string& path, const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    write_csv(path, assignment_table(net, a, m));
}

DelayAssignment load_assignment(const std::string& path, const LogicNetwork& net, const OperatingModel* m) {
    CsvTable t = read_csv(path);
    const int cg = t.column("gate_id"), cd = t.column("delay_factor"), cc = t.column("current_A");
    if (cg < 0 || cd < 0) throw ConfigError("delay_shaping", path + ": expected gate_id and delay_factor columns");
    DelayAssignment a = DelayAssignment::uniform(net);
    std::vector<char> seen(net.size(), 0);
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const std::string where = path + ": row " + std::to_string(r + 1);
        int g = -1;
        double df = 0, cur = 0;
        try {
            g = std::stoi(row.at(cg));
            df = std::stod(row.at(cd));
            if (cc >= 0 && m && !row.at(cc).empty()) cur = std::stod(row.at(cc));
        } catch (const std::exception&) {
            throw ConfigError("delay_shaping", where + " is malformed");
        }
        if (g < 0 || g >= int(net.size()) || !net.timed(g)) throw ConfigError("delay_shaping", where + " names gate " + std::to_string(g) + ", which is not a timed gate");
        if (seen[g]) throw ConfigError("delay_shaping", where + " repeats gate " + std::to_string(g));
        if (!(df > 0)) throw ConfigError("delay_shaping", where + " has a non-positive delay factor");
        seen[g] = 1;
        a.df[g] = df;
        a.cf[g] = (cur > 0 && m) ? cur / m->current(1.0) : 1.0 / std::sqrt(df);
    }
    for (std::size_t g = 0; g < net.size(); ++g)
        if (net.timed(int(g)) && !seen[g]) throw ConfigError("delay_shaping", path + ": gate " + std::to_string(g) + " is missing");
    return a;
}

BitTable table_from_assignment(const LogicNetwork& rca, const DelayAssignment& a) {
    check_rca(rca);
    const int n = int(rca.size() / 4);
    BitTable t(n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < 4; ++c) t[r][c] = a.df[rca_gate(n - 1 - r, c)];
    return t;
}

DelayAssignment assignment_from_table(const LogicNetwork& rca, const BitTable& t) {
    check_rca(rca);
    const int n = int(rca.size() / 4);
    if (int(t.size()) != n) throw ConfigError("delay_shaping", "table has " + std::to_string(t.size()) + " rows, adder has " + std::to_string(n) + " bits");
    DelayAssignment a = DelayAssignment::uniform(rca);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < 4; ++c) {
            const int g = rca_gate(n - 1 - r, c);
            a.df[g] = t[r][c];
            a.cf[g] = 1.0 / std::sqrt(t[r][c]);
        }
    return a;
}

BitTable ed_table_2a() {
    BitTable t;
    for (int r = 0; r < 14; ++r) t.push_back({double(2 * r + 1), 3.0, 1.0, 1.0});
    t.push_back({28.0, 3.0, 1.0, 1.0});
    return t;
}

BitTable ed_table_2b() {
    return {
        {0.671428571428572, 2.01428571428571, 0.671428571428572, 0.671428571428572},
        {2.01428571428571, 2.01428571428571, 0.671428571428572, 0.671428571428572},
        {3.10127728174603, 3.10127728174603, 0.671428571428572, 0.671428571428572},
        {4.55078125000000, 4.55078125000000, 1.46718750000000, 1.50255456349206},
        {5.92955109126984, 5.92955109126984, 1.39645337301587, 1.43182043650794},
        {7.23758680555556, 7.23758680555556, 1.32571924603175, 1.36108630952381},
        {8.47488839285714, 8.47488839285714, 1.25498511904762, 1.29035218253968},
        {9.64145585317461, 9.64145585317461, 1.18425099206349, 1.21961805555556},
        {10.7372891865079, 10.7372891865079, 1.11351686507937, 1.14888392857143},
        {11.7623883928571, 11.7623883928571, 1.04278273809524, 1.07814980158730},
        {12.7167534722222, 12.7167534722222, 0.972048611111111, 1.00741567460317},
        {13.6003844246032, 13.6003844246032, 0.901314484126984, 0.936681547619048},
        {14.4132812500000, 14.4132812500000, 0.830580357142857, 0.865947420634921},
        {15.1554439484127, 15.1554439484127, 0.759846230158730, 0.795213293650794},
        {15.5000000000000, 15.5000000000000, 0.689112103174603, 0.724479166666667},
    };
}

}  // namespace spinsc
