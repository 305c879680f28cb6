#include "spinsc/delay_shaping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinsc/csv.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

// ---------------------------------------------------------------- operating model

OperatingModel OperatingModel::abstract(const DeviceParams& p, double eps_unit, double unit_overdrive) {
    if (!(eps_unit > 0 && eps_unit < 1)) throw ConfigError("delay_shaping", "unit epsilon must lie in (0, 1)");
    if (!(unit_overdrive > 0)) throw ConfigError("delay_shaping", "unit overdrive must be positive");
    OperatingModel m;
    m.mode = EpsMode::Abstract;
    m.device = p;
    m.eps_unit = eps_unit;
    m.unit_overdrive = unit_overdrive;
    m.unit_delay = isok_drive_product(p, eps_unit) / unit_overdrive;
    return m;
}

OperatingModel OperatingModel::abstract_at_delay(const DeviceParams& p, double eps_unit, double unit_delay) {
    if (!(unit_delay > 0)) throw ConfigError("delay_shaping", "unit delay must be positive");
    OperatingModel m = abstract(p, eps_unit);
    m.unit_delay = unit_delay;
    m.unit_overdrive = isok_drive_product(p, eps_unit) / unit_delay;
    return m;
}

OperatingModel OperatingModel::physical(const DeviceParams& p, double eps_unit, double unit_overdrive) {
    if (!(eps_unit > 0 && eps_unit < 1)) throw ConfigError("delay_shaping", "unit epsilon must lie in (0, 1)");
    OperatingModel m;
    m.mode = EpsMode::Physical;
    m.device = p;
    m.eps_unit = eps_unit;
    m.unit_overdrive = unit_overdrive;
    m.unit_delay = solve_operating_point(p, eps_unit, FixedQuantity::Current, unit_overdrive).drive.t_g;
    return m;
}

double OperatingModel::current(double cf) const { return cf * unit_overdrive * device.i_crit_A(); }

double OperatingModel::energy(GateKind k, double df, double cf) const {
    return gate_energy(device, current(cf), delay(df), k);
}

double OperatingModel::epsilon(double df, double cf) const {
    if (mode == EpsMode::Abstract) return isok_error_rate(device, cf * unit_overdrive * df * unit_delay);
    return closed_form_error_rate(device, {cf * unit_overdrive, 0.0, df * unit_delay});
}

double OperatingModel::cf_for_epsilon(double df, double eps) const {
    if (mode == EpsMode::Abstract) return isok_drive_product(device, eps) / (unit_overdrive * df * unit_delay);
    return solve_operating_point(device, eps, FixedQuantity::Delay, df * unit_delay).drive.i / unit_overdrive;
}

// ---------------------------------------------------------------- assignments

DelayAssignment DelayAssignment::uniform(const LogicNetwork& net) {
    DelayAssignment a;
    a.df.assign(net.gates.size(), 1.0);
    a.cf.assign(net.gates.size(), 1.0);
    for (std::size_t g = 0; g < net.gates.size(); ++g)
        if (!net.timed(int(g))) a.df[g] = a.cf[g] = 0.0;
    return a;
}

std::vector<GateAnnotation> annotate(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    std::vector<GateAnnotation> out(net.gates.size());
    for (std::size_t g = 0; g < out.size(); ++g) {
        if (!net.timed(int(g))) continue;
        auto& o = out[g];
        o.delay_s = m.delay(a.df[g]);
        o.current_A = m.current(a.cf[g]);
        o.energy_J = m.energy(net.gates[g].kind, a.df[g], a.cf[g]);
        o.epsilon = m.epsilon(a.df[g], a.cf[g]);
    }
    return out;
}

double total_energy(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    double e = 0;
    for (std::size_t g = 0; g < net.gates.size(); ++g)
        if (net.timed(int(g))) e += m.energy(net.gates[g].kind, a.df[g], a.cf[g]);
    return e;
}

std::vector<double> gate_epsilons(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    std::vector<double> e(net.gates.size(), 0.0);
    for (std::size_t g = 0; g < e.size(); ++g)
        if (net.timed(int(g))) e[g] = m.epsilon(a.df[g], a.cf[g]);
    return e;
}

// ---------------------------------------------------------------- balance

BalanceReport is_balanced(const LogicNetwork& net, const std::vector<double>& delays, double rel_tol) {
    auto t = timing_tables(net, delays);
    BalanceReport r;
    const int n = int(net.gates.size());
    for (int g = 0; g < n; ++g)
        if (net.timed(g) && t.arrival[g] != kNoPath) r.t_cp = std::max(r.t_cp, t.arrival[g]);
    r.residual.assign(n, 0.0);
    const double tol = rel_tol * r.t_cp;
    r.balanced = true;
    for (int g = 0; g < n; ++g) {
        if (!net.timed(g)) continue;
        if (t.arrival[g] == kNoPath || t.departure[g] == kNoPath) {
            r.residual[g] = std::numeric_limits<double>::infinity();
        } else {
            r.residual[g] = r.t_cp - (t.arrival[g] + t.departure[g] - delays[g]);
        }
        if (std::abs(r.residual[g]) > r.max_residual) {
            r.max_residual = std::abs(r.residual[g]);
            r.worst_gate = g;
        }
        if (std::abs(r.residual[g]) > tol) r.balanced = false;
    }
    return r;
}

std::vector<double> absorb_slack(const LogicNetwork& net, std::vector<double> d) {
    auto t = timing_tables(net, d);
    const int n = int(net.gates.size());
    double t_cp = 0;
    for (int g = 0; g < n; ++g)
        if (net.timed(g) && t.arrival[g] != kNoPath) t_cp = std::max(t_cp, t.arrival[g]);
    const auto& order = net.topo_order();
    const auto& fo = net.fanouts();
    const auto& po = net.is_po_node();
    std::vector<double> dep(n, kNoPath);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int g = *it;
        if (!net.timed(g)) continue;
        double after = po[g] ? 0.0 : kNoPath;
        for (int s : fo[g])
            if (net.timed(s)) after = std::max(after, dep[s]);
        if (after == kNoPath || t.arrival[g] == kNoPath) continue;
        const double before = t.arrival[g] - d[g];
        const double want = t_cp - before - after;
        if (want > d[g]) d[g] = want;
        dep[g] = d[g] + after;
    }
    return d;
}

// ---------------------------------------------------------------- I-PDB

IpdbResult ipdb(const LogicNetwork& net, const IpdbOptions& opt) {
    IpdbResult r;
    r.assignment = DelayAssignment::uniform(net);
    auto& T = r.assignment.df;
    r.path_count = count_primary_paths(net);
    if (opt.force_fallback || r.path_count > opt.path_cap) {
        T = absorb_slack(net, T);
        for (std::size_t g = 0; g < T.size(); ++g)
            if (net.timed(int(g))) {
                r.assignment.cf[g] = 1.0 / std::sqrt(T[g]);
                if (T[g] != 1.0) r.update_order.push_back(int(g));
            }
        return r;
    }
    r.enumerated = true;
    PathSet ps = enumerate_paths(net, {opt.path_cap});
    const int n = int(net.gates.size());
    const auto& P = ps.paths;
    if (P.empty()) return r;
    std::vector<char> critical(n, 0);
    for (int k = 0; k < ps.n_critical; ++k)
        for (int g : P[k]) critical[g] = 1;
    const double t_cp = double(P[0].size());
    std::vector<std::vector<int>> through(n);
    for (std::size_t k = 0; k < P.size(); ++k)
        for (int g : P[k]) through[g].push_back(int(k));
    std::vector<char> done(n, 0);
    std::size_t fam_end = 0;
    for (std::size_t k = ps.n_critical; k < P.size(); ++k) {
        // Family rho(P_k): all paths with at least |P_k| gates, a prefix of the ordering.
        while (fam_end < P.size() && P[fam_end].size() >= P[k].size()) ++fam_end;
        // Partitions are visited input side first; gates on the critical set and
        // gates already updated (they lie on an earlier path) are skipped.
        for (int g : P[k]) {
            if (critical[g] || done[g]) continue;
            double best = kNoPath;
            for (int pid : through[g]) {
                double s = 0;
                for (int x : P[pid]) s += T[x];
                best = std::max(best, s - T[g]);
            }
            T[g] = t_cp - best;
            done[g] = 1;
            r.update_order.push_back(g);
        }
    }
    for (int g = 0; g < n; ++g)
        if (net.timed(g)) r.assignment.cf[g] = 1.0 / std::sqrt(T[g]);
    return r;
}

DelayAssignment constrained_ipdb(const LogicNetwork& net, const OperatingModel& m, double eps_floor,
                                 const IpdbOptions& opt) {
    if (!(eps_floor >= 0 && eps_floor < 1)) throw ConfigError("delay_shaping", "epsilon floor must lie in [0, 1)");
    DelayAssignment a = ipdb(net, opt).assignment;
    if (eps_floor == 0) return a;
    for (std::size_t g = 0; g < a.size(); ++g) {
        if (!net.timed(int(g))) continue;
        if (m.epsilon(a.df[g], a.cf[g]) < eps_floor) a.cf[g] = m.cf_for_epsilon(a.df[g], eps_floor);
    }
    return a;
}

// ---------------------------------------------------------------- I-PDR

namespace {

double start_time(const LogicNetwork& net, const std::vector<double>& fin, int g) {
    double s = net.is_pi_node(g) ? 0.0 : kNoPath;
    for (const Fanin& f : net.gates[g].fanins)
        if (f.is_gate() && net.timed(f.index)) s = std::max(s, fin[f.index]);
    return s;
}

}  // namespace

IpdrOutcome ipdr(const LogicNetwork& net, const DelayAssignment& a, const IpdrMove& mv, const IpdrOptions& opt) {
    const int n = int(net.gates.size());
    if (mv.gate < 0 || mv.gate >= n || !net.timed(mv.gate))
        throw DomainError("delay_shaping", "ipdr move names no timed gate");
    if (!(mv.amount >= 0)) throw DomainError("delay_shaping", "ipdr amount T_1 must be non-negative");
    auto before = is_balanced(net, a.df, opt.rel_tol);
    if (!before.balanced)
        throw DomainError("delay_shaping", "ipdr needs a balanced assignment (gate " + std::to_string(before.worst_gate) +
                                               " has slack " + fmt_double(before.residual[before.worst_gate]) + ")");
    IpdrOutcome out{a, 0.0};
    if (mv.amount == 0) return out;
    const double t_cp = before.t_cp;
    auto t = timing_tables(net, a.df);
    std::vector<double> fin = t.arrival;  // finish time (potential) of each gate

    int shrink = -1;
    if (mv.dir == IpdrMove::Dir::Downstream) {
        shrink = mv.gate;
        if (!(mv.amount < a.df[mv.gate]))
            throw DomainError("delay_shaping", "T_1 must be smaller than the delay of gate " + std::to_string(mv.gate));
        fin[mv.gate] -= mv.amount;
    } else {
        int pred = -1;
        if (!mv.path.empty()) {
            auto it = std::find(mv.path.begin(), mv.path.end(), mv.gate);
            if (it == mv.path.end()) throw DomainError("delay_shaping", "move gate is not on the given path");
            if (it == mv.path.begin())
                throw DomainError("delay_shaping", "gate " + std::to_string(mv.gate) + " starts the path; no upstream gate");
            pred = *(it - 1);
        } else {
            for (const Fanin& f : net.gates[mv.gate].fanins)
                if (f.is_gate() && net.timed(f.index) && (pred < 0 || fin[f.index] > fin[pred])) pred = f.index;
            if (pred < 0) throw DomainError("delay_shaping", "gate " + std::to_string(mv.gate) + " has no upstream gate");
        }
        shrink = mv.gate;
        fin[pred] += mv.amount;
        if (!(fin[mv.gate] - start_time(net, fin, mv.gate) > 0))
            throw DomainError("delay_shaping", "T_1 must be smaller than the delay of gate " + std::to_string(mv.gate));
    }

    // Recompute delays from the shifted potentials; gates other than the one
    // being shortened never drop below min(min_delay, their old delay).
    std::vector<double> d(n, 0.0);
    for (int g : net.topo_order()) {
        if (!net.timed(g)) continue;
        const double s = start_time(net, fin, g);
        if (g != shrink) fin[g] = std::max(fin[g], s + std::min(opt.min_delay, a.df[g]));
        d[g] = fin[g] - s;
        if (!(d[g] > 0))
            throw DomainError("delay_shaping", "move drives the delay of gate " + std::to_string(g) + " to " + fmt_double(d[g]));
        if (fin[g] > t_cp * (1 + opt.rel_tol))
            throw DomainError("delay_shaping", "move pushes gate " + std::to_string(g) + " past the critical-path delay");
    }
    d = absorb_slack(net, d);
    auto after = is_balanced(net, d, opt.rel_tol);
    if (!after.balanced)
        throw DomainError("delay_shaping", "move leaves gate " + std::to_string(after.worst_gate) + " unbalanced");
    if (std::abs(after.t_cp - t_cp) > opt.rel_tol * t_cp)
        throw DomainError("delay_shaping", "move changes T_cp from " + fmt_double(t_cp) + " to " + fmt_double(after.t_cp));
    for (int g = 0; g < n; ++g)
        if (net.timed(g)) out.delta_total_delay += energy_coefficient(net.gates[g].kind) * (d[g] - a.df[g]);
    out.assignment.df = d;
    return out;
}

ScheduleResult ipdr_schedule(const LogicNetwork& net, const DelayAssignment& a, const ScheduleProfile& prof) {
    ScheduleResult r;
    r.assignment = a;
    if (prof.p <= 0) return r;
    if (!(prof.fast_factor > 0)) throw ConfigError("delay_shaping", "fast_factor must be positive");
    std::vector<int> bits;
    for (const auto& o : net.outputs) bits.push_back(o.bit);
    std::sort(bits.begin(), bits.end());
    bits.erase(std::unique(bits.begin(), bits.end()), bits.end());
    if (prof.p >= int(bits.size())) throw ConfigError("delay_shaping", "p must be smaller than the number of output bits");
    // MSB set = the top p bits; fast gates feed only bits above its lowest member.
    const int lowest_msb = bits[bits.size() - prof.p];
    const auto minbit = min_reachable_output_bit(net);
    const Path chain = first_critical_path(net);
    const int N = int(chain.size());
    double fast_sum = 0, slow_sum = 0;
    std::vector<char> fast(N, 0);
    for (int j = 0; j < N; ++j) {
        if (minbit[chain[j]] > lowest_msb) {
            fast[j] = 1;
            r.fast_gates.push_back(chain[j]);
            fast_sum += prof.fast_factor;
        } else {
            slow_sum += a.df[chain[j]];
        }
    }
    double t_cp = 0;
    for (int g : chain) t_cp += a.df[g];
    if (r.fast_gates.empty() || slow_sum <= 0) {
        r.report = "no critical-path gate feeds only the top " + std::to_string(prof.p) + " output bits";
        return r;
    }
    const double scale = (t_cp - fast_sum) / slow_sum;
    std::vector<double> target(N);
    double acc = 0;
    for (int j = 0; j < N; ++j) {
        acc += fast[j] ? prof.fast_factor : a.df[chain[j]] * scale;
        target[j] = acc;
    }
    IpdrOptions io;
    io.min_delay = prof.min_delay;
    for (int j = N - 2; j >= 0; --j) {
        auto t = timing_tables(net, r.assignment.df);
        const double shift = target[j] - t.arrival[chain[j]];
        if (std::abs(shift) <= 1e-12 * t_cp) continue;
        IpdrMove mv;
        mv.path = chain;
        if (shift > 0) {
            mv.gate = chain[j + 1];
            mv.dir = IpdrMove::Dir::Upstream;
            mv.amount = shift;
        } else {
            mv.gate = chain[j];
            mv.dir = IpdrMove::Dir::Downstream;
            mv.amount = -shift;
        }
        try {
            r.assignment = ipdr(net, r.assignment, mv, io).assignment;
            r.moves.push_back(mv);
        } catch (const DomainError& e) {
            r.report = "stopped after " + std::to_string(r.moves.size()) + " moves: " + e.what();
            break;
        }
    }
    return r;
}

DelayAssignment current_redistribute(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m,
                                     const std::vector<int>& region, const std::vector<double>& scale) {
    if (region.size() != scale.size()) throw ConfigError("delay_shaping", "region and scale lengths differ");
    DelayAssignment out = a;
    double e_old = 0, e_new = 0;
    for (std::size_t k = 0; k < region.size(); ++k) {
        int g = region[k];
        if (!net.timed(g)) continue;
        if (!(scale[k] > 0)) throw ConfigError("delay_shaping", "current scale factors must be positive");
        double c = energy_coefficient(net.gates[g].kind) * a.df[g];
        e_old += c * a.cf[g] * a.cf[g];
        e_new += c * a.cf[g] * a.cf[g] * scale[k] * scale[k];
    }
    if (e_new <= 0) return out;
    const double lambda = std::sqrt(e_old / e_new);
    for (std::size_t k = 0; k < region.size(); ++k) {
        int g = region[k];
        if (!net.timed(g)) continue;
        out.cf[g] = a.cf[g] * scale[k] * lambda;
        if (m.mode == EpsMode::Physical && !(out.cf[g] * m.unit_overdrive > 1))
            throw DomainError("delay_shaping", "redistribution drives gate " + std::to_string(g) + " to overdrive i <= 1");
    }
    return out;
}

TimingSummary timing_summary(const LogicNetwork& net, const DelayAssignment& a, const OperatingModel& m) {
    TimingSummary s = critical_path_summary(net, a.df);
    const double t_avg_factor = s.n_cp > 0 ? s.t_cp / s.n_cp : 0.0;
    s.t_cp = m.delay(s.t_cp);
    s.t_cp_avg = m.delay(t_avg_factor);
    s.eps_cp_avg = t_avg_factor > 0 ? m.epsilon_at_unit_energy(t_avg_factor) : 0.0;
    return s;
}

}  // namespace spinsc
