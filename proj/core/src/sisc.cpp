#include "spinsc/sisc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spinsc/arith_gen.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
    std::int64_t q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}

}  // namespace

int FusionParams::s() const {
    int s = 0;
    while ((std::int64_t(1) << s) < p_k) ++s;
    return s;
}

std::int64_t FusionParams::step() const { return std::int64_t(1) << std::max(0, l - s()); }

void FusionParams::validate() const {
    if (p_k < 1) throw ConfigError("sisc", "p_k must be at least 1");
    if (l < 1 || l > 62) throw ConfigError("sisc", "output precision l must lie in [1, 62]");
    if (s() > l) throw ConfigError("sisc", "p_k needs more than l bits");
}

FuseResult fuse(std::int64_t y_a, std::int64_t y_e, const FusionParams& p) {
    const std::int64_t step = p.step();
    // floor(d/step + 1/2) = floor((2d + step) / (2 step)) on exact integers
    const std::int64_t q = floor_div(2 * (y_a - y_e) + step, 2 * step);
    FuseResult r;
    r.eta_hat = q * step;
    r.y_hat = y_a - r.eta_hat;
    return r;
}

bool SparsityReport::sparse_for(const FusionParams& p) const {
    if (peak_count == 0 || peak_count > p.p_k) return false;
    return peak_count == 1 || min_separation >= p.step();
}

SparsityReport pmf_sparsity(const ErrorPmf& pmf, double delta) {
    if (!(delta > 0.0 && delta < 0.5)) throw DomainError("sisc", "sparsity threshold must lie in (0, 0.5)");
    SparsityReport r;
    if (pmf.samples == 0) return r;
    double peak_mass = 0.0;
    for (const auto& [v, c] : pmf.counts) {
        const double pr = double(c) / double(pmf.samples);
        if (pr > delta) {
            r.peaks.push_back(v);
            peak_mass += pr;
        }
    }
    r.peak_count = int(r.peaks.size());
    r.tail_mass = std::max(0.0, 1.0 - peak_mass);
    if (r.peaks.size() >= 2) {
        r.min_separation = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 1; i < r.peaks.size(); ++i)
            r.min_separation = std::min(r.min_separation, r.peaks[i] - r.peaks[i - 1]);
    }
    return r;
}

ConditionReport check_sparsity_condition(const BitErrorProfile& profile, int p, double ratio_min) {
    const int l = int(profile.rate.size());
    if (p < 1 || p >= l) throw DomainError("sisc", "MSB count p must lie in [1, l)");
    ConditionReport r;
    r.min_msb = std::numeric_limits<double>::infinity();
    for (int k = l - p; k < l; ++k) r.min_msb = std::min(r.min_msb, profile.rate[k]);
    for (int k = 0; k < l - p; ++k) r.max_lsb = std::max(r.max_lsb, profile.rate[k]);
    if (r.min_msb == 0.0) {
        r.note = "degenerate: an MSB-set output never failed";
        return r;
    }
    if (r.max_lsb == 0.0) {
        r.margin = std::numeric_limits<double>::infinity();
        r.pass = true;
        r.note = "no LSB-set failures observed";
        return r;
    }
    r.margin = r.min_msb / r.max_lsb;
    r.pass = r.margin >= ratio_min;
    return r;
}

const char* to_string(Region r) {
    switch (r) {
        case Region::MainBlock: return "MB";
        case Region::Estimator: return "EST";
        case Region::Fusion: return "EC";
    }
    return "?";
}

SiscArchitecture compose_sisc(const LogicNetwork& main, const std::vector<EstimatorTerm>& terms,
                              std::int64_t constant, const EcConfig& ec) {
    SiscArchitecture arch;
    arch.network = main;
    LogicNetwork& net = arch.network;
    net.name = main.name + "_sisc";
    const auto ya_idx = main.group_outputs("");
    const int l = int(ya_idx.size());
    if (l < 2) throw DomainError("sisc", "main block must expose a word of at least 2 bits");
    std::vector<Fanin> ya(l);
    for (int k = 0; k < l; ++k) {
        const auto& o = main.outputs[ya_idx[k]];
        if (o.bit != k) throw DomainError("sisc", "main block output bits must be contiguous from 0");
        ya[k] = Fanin::gate(o.gate);
    }
    for (auto& o : net.outputs)
        if (o.group.empty()) o.group = "ya";
    arch.fusion = {l, ec.p_k};
    arch.ec = ec;
    arch.fusion.validate();
    arch.mb_gates = main.size();

    NetBuilder b(net);
    const int lo = std::clamp(ec.drop_bits, 0, l - 1);

    // Estimator: serial carry-save accumulation of the tap words over columns lo..l-1.
    const std::vector<std::string> et{"est"};
    const std::int64_t rounded = floor_div(constant + (lo ? (std::int64_t(1) << (lo - 1)) : 0), std::int64_t(1) << lo)
                                 << lo;
    arch.estimator_constant = rounded;
    auto cbits = to_bits(rounded, l);
    std::vector<Fanin> s(l, Fanin::constant(0)), c(l, Fanin::constant(0));
    for (int k = 0; k < l; ++k) s[k] = Fanin::constant(cbits[k]);
    std::vector<std::vector<Fanin>> rows;
    for (const auto& t : terms) {
        auto it = main.taps.find(t.tap);
        if (it == main.taps.end()) throw DomainError("sisc", "estimator tap '" + t.tap + "' does not exist");
        const auto& w = it->second;
        if (w.empty()) throw DomainError("sisc", "estimator tap '" + t.tap + "' is empty");
        std::vector<Fanin> row(l, Fanin::constant(0));
        for (int k = 0; k < l; ++k) {
            const int j = k - t.shift;
            if (j < 0) continue;
            row[k] = w[std::min<std::size_t>(j, w.size() - 1)];
        }
        rows.push_back(std::move(row));
    }
    if (ec.trim_input) {
        std::vector<Fanin> row(l);
        for (int k = 0; k < l; ++k) row[k] = b.input("trim" + std::to_string(k));
        rows.push_back(std::move(row));
    }
    bool first = true;
    for (const auto& row : rows) {
        if (first) {
            c = row;
            first = false;
            continue;
        }
        std::vector<Fanin> ns(l, Fanin::constant(0)), nc(l, Fanin::constant(0));
        for (int k = lo; k < l; ++k) {
            auto r = b.full_adder(s[k], c[k], row[k], et);
            ns[k] = r.sum;
            if (k + 1 < l) nc[k + 1] = r.carry;
        }
        s = ns;
        c = nc;
    }
    std::vector<Fanin> ye(l, Fanin::constant(0));
    {
        std::vector<Fanin> hs(s.begin() + lo, s.end()), hc(c.begin() + lo, c.end());
        auto sum = b.ripple_add(hs, hc, Fanin::constant(0), et);
        for (int k = lo; k < l; ++k) ye[k] = sum[k - lo];
    }
    for (int k = lo; k < l; ++k) b.output("ye" + std::to_string(k), ye[k], k, k == l - 1, et, "ye");

    // Fusion: d = ya - ye, r = d + step/2, yhat = ya - step * r[l-s..l).
    const std::vector<std::string> ft{"fusion"};
    const int sb = arch.fusion.s();
    std::vector<Fanin> yhat = ya;
    if (sb > 0) {
        std::vector<Fanin> nye(l);
        for (int k = 0; k < l; ++k) nye[k] = b.invert(ye[k], ft);
        auto d = b.ripple_add(ya, nye, Fanin::constant(1), ft);
        const int h = l - sb;  // first quotient bit
        std::vector<Fanin> r = d;
        if (h >= 1) {
            std::vector<Fanin> part(d.begin() + (h - 1), d.end()), half(part.size(), Fanin::constant(0));
            half[0] = Fanin::constant(1);
            auto rs = b.ripple_add(part, half, Fanin::constant(0), ft);
            for (std::size_t k = 0; k < rs.size(); ++k) r[h - 1 + k] = rs[k];
        }
        std::vector<Fanin> top(ya.begin() + h, ya.end()), nq(sb);
        for (int k = 0; k < sb; ++k) nq[k] = b.invert(r[h + k], ft);
        auto diff = b.ripple_add(top, nq, Fanin::constant(1), ft);
        for (int k = 0; k < sb; ++k) yhat[h + k] = diff[k];
    }
    for (int k = 0; k < l; ++k) b.output("yhat" + std::to_string(k), yhat[k], k, k == l - 1, ft, "yhat");
    // Fusion sum bits below the quotient only feed carries; drop the dead gates.
    net.prune();
    arch.region.assign(net.size(), Region::MainBlock);
    for (std::size_t g = arch.mb_gates; g < net.size(); ++g)
        arch.region[g] = net.gates[g].has_tag("est") ? Region::Estimator : Region::Fusion;
    arch.est_gates = std::size_t(std::count(arch.region.begin(), arch.region.end(), Region::Estimator));
    arch.fusion_gates = net.size() - arch.mb_gates - arch.est_gates;
    net.invalidate_cache();
    net.require_valid();
    if (arch.ec_ratio() > 0.15) {
        arch.warning = "EC overhead " + std::to_string(100.0 * arch.ec_ratio()) + "% of MB gates exceeds 15% (estimator " +
                       std::to_string(arch.est_gates) + ", fusion " + std::to_string(arch.fusion_gates) + ", MB " +
                       std::to_string(arch.mb_gates) + ")";
    }
    return arch;
}

DelayAssignment extend_assignment(const SiscArchitecture& arch, const DelayAssignment& main, const OperatingModel& m,
                                  double eps_ec) {
    if (main.size() != arch.mb_gates) throw DomainError("sisc", "main-block assignment size mismatch");
    if (!(eps_ec > 0.0 && eps_ec < 1.0)) throw DomainError("sisc", "EC epsilon must lie in (0, 1)");
    const auto& net = arch.network;
    DelayAssignment a;
    a.df = main.df;
    a.cf = main.cf;
    a.df.resize(net.size(), 0.0);
    a.cf.resize(net.size(), 0.0);
    const double cf_est = m.cf_for_epsilon(1.0, eps_ec);
    const double fdf = arch.ec.fusion_delay_factor;
    const double cf_fus = m.cf_for_epsilon(fdf, eps_ec);
    for (std::size_t g = arch.mb_gates; g < net.size(); ++g) {
        if (!net.timed(int(g))) continue;
        const bool est = arch.region[g] == Region::Estimator;
        a.df[g] = est ? 1.0 : fdf;
        a.cf[g] = est ? cf_est : cf_fus;
    }
    return a;
}

}  // namespace spinsc
