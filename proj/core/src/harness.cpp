#include "spinsc/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "spinsc/arith_gen.hpp"
#include "spinsc/assignment_io.hpp"
#include "spinsc/delay_shaping.hpp"
#include "spinsc/device_model.hpp"
#include "spinsc/errors.hpp"
#include "spinsc/noisy_sim.hpp"
#include "spinsc/rng.hpp"
#include "spinsc/sisc.hpp"
#include "spinsc/svm_bench.hpp"

#ifndef SPINSC_VERSION
#define SPINSC_VERSION "0.0.0"
#endif

namespace spinsc {

namespace fs = std::filesystem;

namespace {

[[noreturn]] void config_error(const std::string& what) { throw ConfigError("harness", what); }

std::string fnv_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

// Shared state of one run: effective config, output sink, and resolved options.
class Context {
public:
    Context(const RunRequest& req, std::ostream* log) : req_(req), cfg_(req.config), log_(log) {
        if (req.seed) cfg_.set("run", "seed", std::int64_t(*req.seed));
        if (req.trials) cfg_.set("run", "trials", std::int64_t(*req.trials));
        if (req.format) cfg_.set("run", "format", std::string(*req.format == OutputFormat::Json ? "json" : "csv"));
        if (req.out_dir) cfg_.set("run", "out", *req.out_dir);
        cfg_.mark_used("manifest");

        if (!cfg_.has("run", "seed")) config_error("a seed is required: set [run] seed or pass --seed");
        seed_ = cfg_.get_uint("run", "seed", 0);
        const std::string fmt = cfg_.get_string("run", "format", "csv");
        if (fmt == "csv") format_ = OutputFormat::Csv;
        else if (fmt == "json") format_ = OutputFormat::Json;
        else config_error("[run] format must be \"csv\" or \"json\", got \"" + fmt + "\"");
        out_dir_ = cfg_.get_string("run", "out", "out");
        if (out_dir_.empty()) config_error("[run] out must not be empty");
        if (cfg_.has("run", "trials") && cfg_.get_int("run", "trials", 1) < 1) config_error("[run] trials must be >= 1");
        if (cfg_.has("manifest", "subcommand")) {
            const std::string was = cfg_.get_string("manifest", "subcommand", "");
            if (was != req.subcommand)
                warnings_.push_back("config is a manifest of '" + was + "' but runs '" + req.subcommand + "'");
        }
    }

    Config& config() { return cfg_; }
    std::uint64_t seed() const { return seed_; }
    const std::string& out_dir() const { return out_dir_; }

    // Section value, then [run] trials, then the default; --trials beats all.
    std::size_t trials(const std::string& section, std::size_t def) {
        std::int64_t t = std::int64_t(def);
        if (req_.trials) t = std::int64_t(*req_.trials);
        else if (cfg_.has(section, "trials")) t = cfg_.get_int(section, "trials", t);
        else if (cfg_.has("run", "trials")) t = cfg_.get_int("run", "trials", t);
        if (t < 1) config_error("[" + section + "] trials must be >= 1");
        cfg_.get_int(section, "trials", 0);
        cfg_.get_int("run", "trials", 0);
        return std::size_t(t);
    }

    std::string path(const std::string& section, const std::string& key) {
        std::string p = cfg_.get_string(section, key, "");
        if (p.empty()) return p;
        fs::path fp(p);
        if (fp.is_relative() && !req_.config_dir.empty()) fp = fs::path(req_.config_dir) / fp;
        if (!fs::exists(fp)) config_error("[" + section + "] " + key + ": file not found: " + fp.string());
        const std::string abs = fs::weakly_canonical(fp).string();
        cfg_.set(section, key, abs);
        cfg_.get_string(section, key, "");
        return abs;
    }

    std::vector<double> grid(const std::string& section, const std::string& key, const std::vector<double>& def) {
        auto g = cfg_.get_doubles(section, key, def);
        if (g.empty()) config_error("[" + section + "] " + key + " must not be empty");
        return g;
    }

    DeviceParams device() {
        DeviceParams p;
        const std::string file = path("device", "file");
        if (!file.empty()) p = load_device_params(file);
        struct Field {
            const char* key;
            double* v;
        };
        const Field fields[] = {
            {"e_b_kT", &p.e_b_kT}, {"h_k", &p.h_k}, {"m_s", &p.m_s}, {"alpha", &p.alpha}, {"ra", &p.ra},
            {"temperature", &p.temperature}, {"magnet_width", &p.magnet_width},
            {"magnet_length", &p.magnet_length}, {"magnet_thickness", &p.magnet_thickness},
            {"polarization", &p.polarization}, {"channel_length", &p.channel_length},
            {"channel_thickness", &p.channel_thickness}, {"lead_thickness", &p.lead_thickness},
            {"lead_length", &p.lead_length}, {"i_crit", &p.i_crit}, {"n_s", &p.n_s},
        };
        for (const auto& f : fields) *f.v = cfg_.get_double("device", f.key, *f.v);
        p.validate();
        return p;
    }

    OperatingModel model(const DeviceParams& p, double eps_unit) {
        const std::string mode = cfg_.get_string("model", "mode", "abstract");
        const double overdrive = cfg_.get_double("model", "unit_overdrive", 5.0);
        if (mode == "abstract") return OperatingModel::abstract(p, eps_unit, overdrive);
        if (mode == "physical") return OperatingModel::physical(p, eps_unit, overdrive);
        config_error("[model] mode must be \"abstract\" or \"physical\", got \"" + mode + "\"");
    }

    void emit(const std::string& name, const CsvTable& t) {
        const std::string file = name + (format_ == OutputFormat::Csv ? ".csv" : ".json");
        const fs::path p = fs::path(out_dir_) / file;
        if (format_ == OutputFormat::Csv) {
            write_csv(p.string(), t);
        } else {
            std::ofstream f(p, std::ios::binary);
            if (!f) throw Error("harness", "cannot write " + p.string());
            f << table_json(t);
        }
        files_.push_back(file);
        info("wrote " + p.string());
    }

    void summary(const std::string& key, const std::string& value) { summary_.emplace_back(key, value); }
    void summary(const std::string& key, double value) { summary_.emplace_back(key, fmt_double(value)); }
    void warn(const std::string& w) {
        warnings_.push_back(w);
        if (log_) *log_ << "warning: " << w << "\n";
    }
    void info(const std::string& s) {
        if (log_) *log_ << s << "\n" << std::flush;
    }

    RunReport finish(double wall) {
        if (!summary_.empty()) {
            CsvTable t;
            t.header = {"key", "value"};
            for (const auto& [k, v] : summary_) t.rows.push_back({k, v});
            emit(req_.subcommand == "fuse-check" ? "fuse_summary" : req_.subcommand + "_summary", t);
        }
        for (const auto& k : cfg_.unused_keys()) warn("unused config key '" + k + "'");

        Config manifest = cfg_;
        manifest.set("manifest", "subcommand", req_.subcommand);
        manifest.set("manifest", "version", std::string(SPINSC_VERSION));
        manifest.set("manifest", "seed", std::int64_t(seed_));
        manifest.set("manifest", "wall_time_s", wall);
        manifest.set("manifest", "files", files_);
        std::vector<std::string> digests;
        for (const auto& f : files_) digests.push_back(file_digest((fs::path(out_dir_) / f).string()));
        manifest.set("manifest", "digests", digests);
        const fs::path mp = fs::path(out_dir_) / "manifest.toml";
        std::ofstream f(mp, std::ios::binary);
        if (!f) throw Error("harness", "cannot write " + mp.string());
        f << "# rerun: spinsc " << req_.subcommand << " --config manifest.toml --out DIR\n" << manifest.emit();
        info("wrote " + mp.string());

        RunReport r;
        r.out_dir = out_dir_;
        r.files = files_;
        r.warnings = warnings_;
        r.summary = summary_;
        r.wall_time_s = wall;
        return r;
    }

private:
    const RunRequest& req_;
    Config cfg_;
    std::ostream* log_;
    std::uint64_t seed_ = 0;
    OutputFormat format_ = OutputFormat::Csv;
    std::string out_dir_;
    std::vector<std::string> files_, warnings_;
    std::vector<std::pair<std::string, std::string>> summary_;
};

// ---------------------------------------------------------------- contours

void run_contours(Context& ctx) {
    Config& c = ctx.config();
    const DeviceParams p = ctx.device();
    const double e_min = c.get_double("contours", "e_min", 1e-17);
    const double e_max = c.get_double("contours", "e_max", 1e-15);
    const double t_min = c.get_double("contours", "t_min", 1e-10);
    const double t_max = c.get_double("contours", "t_max", 1e-8);
    const auto n_e = c.get_int("contours", "n_energy", 41);
    const auto n_t = c.get_int("contours", "n_delay", 41);
    if (!(e_min > 0 && e_max > e_min)) config_error("[contours] needs 0 < e_min < e_max");
    if (!(t_min > 0 && t_max > t_min)) config_error("[contours] needs 0 < t_min < t_max");
    if (n_e < 2 || n_t < 2) config_error("[contours] n_energy and n_delay must be >= 2");
    const auto pts = energy_delay_grid(p, e_min, e_max, int(n_e), t_min, t_max, int(n_t));
    CsvTable t;
    t.header = {"energy_J", "delay_s", "epsilon"};
    for (const auto& q : pts) t.rows.push_back({fmt_double(q.energy), fmt_double(q.delay), fmt_double(q.epsilon)});
    ctx.emit("contours", t);
    ctx.summary("points", double(pts.size()));
}

// ---------------------------------------------------------------- fp / llg

struct DrivePoint {
    double e_b_kT, i, t_g, eps_cf;
};

std::vector<DrivePoint> drive_points(Context& ctx, const std::string& sec, const DeviceParams& base) {
    Config& c = ctx.config();
    const auto ebs = ctx.grid(sec, "e_b_kT", {20.0, 40.0});
    const auto is = ctx.grid(sec, "overdrive", {2.5, 3.5});
    std::vector<double> tgs, targets;
    if (c.has(sec, "t_g")) tgs = ctx.grid(sec, "t_g", {});
    else targets = ctx.grid(sec, "eps_target", {0.2, 0.6});
    std::vector<DrivePoint> out;
    for (double eb : ebs)
        for (double i : is) {
            DeviceParams p = base;
            p.e_b_kT = eb;
            p.validate();
            for (double tg : tgs) {
                if (!(tg > 0)) config_error("[" + sec + "] t_g values must be > 0");
                out.push_back({eb, i, tg, closed_form_error_rate(p, {i, 0.0, tg})});
            }
            for (double e : targets) {
                if (!(e > 0 && e < 1)) config_error("[" + sec + "] eps_target values must lie in (0, 1)");
                const auto op = solve_operating_point(p, e, FixedQuantity::Current, i);
                out.push_back({eb, i, op.drive.t_g, op.epsilon});
            }
        }
    return out;
}

void run_fp(Context& ctx) {
    Config& c = ctx.config();
    const DeviceParams base = ctx.device();
    const auto grid_size = c.get_int("fp", "grid_size", 512);
    const double dtau = c.get_double("fp", "dtau", 1e-3);
    if (grid_size < 16 || !(dtau > 0)) config_error("[fp] needs grid_size >= 16 and dtau > 0");
    CsvTable t;
    t.header = {"e_b_kT", "overdrive", "t_g_s", "epsilon_closed_form", "epsilon_fp"};
    for (const auto& d : drive_points(ctx, "fp", base)) {
        DeviceParams p = base;
        p.e_b_kT = d.e_b_kT;
        const double fp = fp_error_rate_at(p, {d.i, 0.0, d.t_g}, int(grid_size), dtau);
        t.rows.push_back({fmt_double(d.e_b_kT), fmt_double(d.i), fmt_double(d.t_g), fmt_double(d.eps_cf), fmt_double(fp)});
    }
    ctx.emit("fp", t);
    ctx.summary("points", double(t.rows.size()));
}

void run_llg(Context& ctx) {
    Config& c = ctx.config();
    const DeviceParams base = ctx.device();
    LlgOptions opt;
    opt.trials = ctx.trials("llg", 10000);
    opt.steps_per_tg = c.get_double("llg", "steps_per_tg", 2000.0);
    opt.thermal = c.get_bool("llg", "thermal", true);
    opt.random_initial = c.get_bool("llg", "random_initial", true);
    if (!(opt.steps_per_tg >= 10)) config_error("[llg] steps_per_tg must be >= 10");
    const bool with_fp = c.get_bool("llg", "compare_fp", true);
    CsvTable t;
    t.header = {"e_b_kT", "overdrive", "t_g_s", "trials", "failures", "epsilon_llg", "std_error",
                "ci_low", "ci_high", "epsilon_fp", "z_score"};
    std::size_t k = 0, within = 0;
    for (const auto& d : drive_points(ctx, "llg", base)) {
        DeviceParams p = base;
        p.e_b_kT = d.e_b_kT;
        opt.seed = derive_seed(substream(ctx.seed(), "llg"), k++);
        const DriveCondition dc{d.i, 0.0, d.t_g};
        const LlgResult r = llg_monte_carlo(p, dc, opt);
        std::string fp_s, z_s;
        if (with_fp) {
            const double fp = fp_error_rate_at(p, dc);
            // Binomial standard error at the reference rate, so a zero count is still scored.
            const double se = std::sqrt(std::max(fp * (1 - fp), 1e-300) / double(r.trials));
            const double z = (r.epsilon - fp) / se;
            fp_s = fmt_double(fp);
            z_s = fmt_double(z);
            if (std::fabs(z) <= 3.0) ++within;
        }
        t.rows.push_back({fmt_double(d.e_b_kT), fmt_double(d.i), fmt_double(d.t_g), std::to_string(r.trials),
                          std::to_string(r.failures), fmt_double(r.epsilon), fmt_double(r.std_error),
                          fmt_double(r.ci_low), fmt_double(r.ci_high), fp_s, z_s});
        ctx.info("llg point " + std::to_string(k) + ": eps " + fmt_double(r.epsilon) + (with_fp ? " vs fp " + fp_s : ""));
    }
    ctx.emit("llg", t);
    ctx.summary("points", double(t.rows.size()));
    if (with_fp) ctx.summary("points_within_3se", double(within));
}

// ---------------------------------------------------------------- shape

CsvTable parse_table(const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
}

void run_shape(Context& ctx) {
    Config& c = ctx.config();
    const DeviceParams p = ctx.device();
    const auto width = c.get_int("shape", "width", 15);
    const double eps = c.get_double("shape", "eps_cp_avg", 0.1);
    const std::size_t trials = ctx.trials("shape", 100000);
    const double delta = c.get_double("shape", "delta", 0.01);
    const double ratio_min = c.get_double("shape", "ratio_min", 10.0);
    ScheduleProfile prof;
    prof.p = int(c.get_int("shape", "msb_outputs", prof.p));
    prof.fast_factor = c.get_double("shape", "fast_factor", prof.fast_factor);
    prof.min_delay = c.get_double("shape", "min_delay", prof.min_delay);
    FusionParams fp;
    fp.l = int(width + 1);
    if (prof.p < 1 || prof.p > 20) config_error("[shape] msb_outputs must lie in [1, 20]");
    // Errors confined to the p MSB outputs take at most 2^p distinct values.
    fp.p_k = int(c.get_int("shape", "p_k", std::int64_t(1) << prof.p));
    if (width < 2 || width > 62) config_error("[shape] width must lie in [2, 62]");
    if (!(eps > 0 && eps < 0.5)) config_error("[shape] eps_cp_avg must lie in (0, 0.5)");
    if (!(delta > 0 && delta < 0.5)) config_error("[shape] delta must lie in (0, 0.5)");
    if (prof.p < 1 || prof.p >= fp.l) config_error("[shape] msb_outputs must lie in [1, width]");
    fp.validate();

    const BlockDescriptor rca = build_rca(int(width));
    const LogicNetwork& net = rca.network;
    const OperatingModel m = ctx.model(p, eps);
    const IpdbResult ib = ipdb(net);
    const ScheduleResult sc = ipdr_schedule(net, ib.assignment, prof);
    if (!sc.report.empty()) ctx.warn("ipdr_schedule: " + sc.report);

    const std::vector<std::pair<std::string, const DelayAssignment*>> variants = {
        {"uniform", nullptr}, {"ipdb", &ib.assignment}, {"ipdr", &sc.assignment}};
    const DelayAssignment uni = DelayAssignment::uniform(net);
    const InputSampler sampler = uniform_input_sampler(net, substream(ctx.seed(), "shape/inputs"), {{"cin", 0}});

    CsvTable bits, sparsity;
    bits.header = {"variant", "bit", "rate", "ci_low", "ci_high", "flips", "trials"};
    sparsity.header = {"variant", "eps_cp_avg", "t_cp_s", "energy_J", "peak_count", "min_separation", "tail_mass",
                       "score", "sparse", "a11_pass", "a11_margin", "a11_min_msb", "a11_max_lsb"};
    for (const auto& [name, ptr] : variants) {
        const DelayAssignment& a = ptr ? *ptr : uni;
        EpsilonAssignment ea;
        ea.eps = gate_epsilons(net, a, m);
        ea.provenance = m.mode == EpsMode::Physical ? EpsilonAssignment::Provenance::Physical
                                                    : EpsilonAssignment::Provenance::Abstract;
        TrialProtocol proto;
        proto.trials = trials;
        proto.seed = substream(ctx.seed(), "shape/noise");
        const MonteCarloResult mc = monte_carlo_error_pmf(net, ea, proto, sampler);

        CsvTable pmf;
        pmf.header = {"value", "probability", "count"};
        for (const auto& [v, n] : mc.pmf.counts)
            pmf.rows.push_back({std::to_string(v), fmt_double(double(n) / double(mc.pmf.samples)), std::to_string(n)});
        ctx.emit("pmf_" + name, pmf);

        const BitErrorProfile prof_bits = bit_error_profile(net, mc.samples);
        for (std::size_t k = 0; k < prof_bits.rate.size(); ++k)
            bits.rows.push_back({name, std::to_string(k), fmt_double(prof_bits.rate[k]), fmt_double(prof_bits.ci_low[k]),
                                 fmt_double(prof_bits.ci_high[k]), std::to_string(prof_bits.flips[k]),
                                 std::to_string(prof_bits.trials)});
        const SparsityReport sr = pmf_sparsity(mc.pmf, delta);
        const ConditionReport cr = check_sparsity_condition(prof_bits, prof.p, ratio_min);
        const TimingSummary ts = timing_summary(net, a, m);
        sparsity.rows.push_back({name, fmt_double(ts.eps_cp_avg), fmt_double(ts.t_cp), fmt_double(total_energy(net, a, m)),
                                 std::to_string(sr.peak_count), std::to_string(sr.min_separation),
                                 fmt_double(sr.tail_mass), fmt_double(sr.score()), sr.sparse_for(fp) ? "1" : "0",
                                 cr.pass ? "1" : "0", fmt_double(cr.margin), fmt_double(cr.min_msb),
                                 fmt_double(cr.max_lsb)});
        ctx.info("shape " + name + ": score " + fmt_double(sr.score()) + ", A11 margin " + fmt_double(cr.margin));
        if (ptr) ctx.emit("delays_" + name, parse_table(assignment_csv(net, a, m)));
    }
    ctx.emit("bit_profile", bits);
    ctx.emit("sparsity", sparsity);

    ctx.summary("ipdb_enumerated", ib.enumerated ? "1" : "0");
    ctx.summary("ipdb_path_count", std::to_string(ib.path_count));
    ctx.summary("ipdr_moves", double(sc.moves.size()));
    if (width == 15) {
        const BitTable got = table_from_assignment(net, ib.assignment), want = ed_table_2a();
        int matching = 0;
        std::string diff;
        for (std::size_t r = 0; r < want.size(); ++r) {
            if (got[r] == want[r]) {
                ++matching;
                continue;
            }
            static const char* col[] = {"m3", "m2", "m1", "i1"};
            for (int k = 0; k < 4; ++k)
                if (got[r][k] != want[r][k])
                    diff += (diff.empty() ? "" : " ") + std::string("row") + std::to_string(r + 1) + "." + col[k] + "=" +
                            fmt_double(got[r][k]) + "(table " + fmt_double(want[r][k]) + ")";
        }
        ctx.summary("table2a_rows_matching", std::to_string(matching) + "/" + std::to_string(want.size()));
        ctx.summary("table2a_differences", diff.empty() ? "none" : diff);
    }
}

// ---------------------------------------------------------------- fuse-check

void run_fuse_check(Context& ctx) {
    Config& c = ctx.config();
    FusionParams fp;
    fp.l = int(c.get_int("fuse", "l", 8));
    fp.p_k = int(c.get_int("fuse", "p_k", 4));
    fp.validate();
    const std::int64_t step = fp.step();
    std::vector<double> etas_d = ctx.grid("fuse", "eta", {0.0, 64.0, -64.0, 128.0, -128.0});
    const auto e_max = c.get_int("fuse", "e_max", step / 2 - 1);
    const auto y_lo = c.get_int("fuse", "y_min", -100);
    const auto y_hi = c.get_int("fuse", "y_max", 100);
    if (e_max < 0 || y_hi < y_lo) config_error("[fuse] needs e_max >= 0 and y_min <= y_max");
    CsvTable t;
    t.header = {"eta", "eta_on_grid", "cases", "exact", "exact_fraction"};
    std::uint64_t all = 0, all_exact = 0;
    for (double ed : etas_d) {
        if (ed != std::floor(ed)) config_error("[fuse] eta values must be integers");
        const auto eta = std::int64_t(ed);
        std::uint64_t n = 0, exact = 0;
        for (std::int64_t y = y_lo; y <= y_hi; ++y)
            for (std::int64_t e = -e_max; e <= e_max; ++e) {
                ++n;
                if (fuse(y + eta, y + e, fp).y_hat == y) ++exact;
            }
        all += n;
        all_exact += exact;
        t.rows.push_back({std::to_string(eta), eta % step == 0 ? "1" : "0", std::to_string(n), std::to_string(exact),
                          fmt_double(double(exact) / double(n))});
    }
    ctx.emit("fuse_check", t);
    ctx.summary("step", double(step));
    ctx.summary("cases", double(all));
    ctx.summary("exact", double(all_exact));
    ctx.summary("exact_fraction", double(all_exact) / double(all));
}

// ---------------------------------------------------------------- svm

std::string eps_label(double e) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", e);
    return buf;
}

void run_svm(Context& ctx) {
    Config& c = ctx.config();
    const DeviceParams dev = ctx.device();

    SyntheticSet syn;
    const std::string data_path = ctx.path("svm", "dataset");
    const std::string model_path = ctx.path("svm", "model");
    if (data_path.empty() != model_path.empty()) config_error("[svm] dataset and model must be given together");
    if (!data_path.empty()) {
        syn.data = load_dataset(data_path);
        syn.model = load_model(model_path);
        if (syn.model.n() != syn.data.n_features())
            config_error("[svm] model has " + std::to_string(syn.model.n()) + " weights but the dataset has " +
                         std::to_string(syn.data.n_features()) + " features");
    } else {
        const auto n = c.get_int("svm", "n_features", 120);
        const auto samples = c.get_int("svm", "n_samples", 4000);
        const double sep = c.get_double("svm", "separation", 3.9);
        const auto data_seed = c.get_uint("svm", "data_seed", 7);
        if (n < 1 || samples < 2 || !(sep >= 0)) config_error("[svm] needs n_features >= 1, n_samples >= 2, separation >= 0");
        syn = synth_dataset(int(n), int(samples), sep, data_seed);
    }

    ShannonConfig sh;
    sh.reorder = c.get_bool("shannon", "reorder", sh.reorder);
    sh.ipdb = c.get_bool("shannon", "ipdb", sh.ipdb);
    sh.eps_floor_ratio = c.get_double("shannon", "eps_floor_ratio", sh.eps_floor_ratio);
    sh.ipdr = c.get_bool("shannon", "ipdr", sh.ipdr);
    sh.fast_factor = c.get_double("shannon", "fast_factor", sh.fast_factor);
    sh.redistribute = c.get_bool("shannon", "redistribute", sh.redistribute);
    sh.ramp = c.get_double("shannon", "ramp", sh.ramp);
    sh.msb_scale = c.get_double("shannon", "msb_scale", sh.msb_scale);
    sh.tap_scale = c.get_double("shannon", "tap_scale", sh.tap_scale);
    sh.rpe_bits = int(c.get_int("shannon", "rpe_bits", sh.rpe_bits));
    sh.trim = c.get_bool("shannon", "trim", sh.trim);
    sh.trim_trials = std::size_t(c.get_int("shannon", "trim_trials", std::int64_t(sh.trim_trials)));
    sh.ec.eps_ratio = c.get_double("ec", "eps_ratio", sh.ec.eps_ratio);
    sh.ec.eps_absolute = c.get_double("ec", "eps_absolute", sh.ec.eps_absolute);
    sh.ec.fusion_delay_factor = c.get_double("ec", "fusion_delay_factor", sh.ec.fusion_delay_factor);
    sh.ec.drop_bits = int(c.get_int("ec", "drop_bits", 9));
    sh.ec.p_k = int(c.get_int("ec", "p_k", 0));

    const auto archs = c.get_strings("svm", "architectures", {"serial", "nmr", "shannon"});
    if (archs.empty()) config_error("[svm] architectures must not be empty");
    const auto n_m = c.get_int("svm", "n_m", 3);
    const auto grid = ctx.grid("svm", "eps_cp_avg", {1e-6, 3.2e-6, 1e-5, 3.2e-5, 1e-4, 3.2e-4, 1e-3, 3.2e-3, 1e-2});
    for (double e : grid)
        if (!(e > 0 && e < 0.5)) config_error("[svm] eps_cp_avg values must lie in (0, 0.5)");
    for (std::size_t k = 1; k < grid.size(); ++k)
        if (!(grid[k] > grid[k - 1])) config_error("[svm] eps_cp_avg must be strictly increasing");

    SvmOperatingPoint base;
    base.device = dev;
    base.unit_delay = c.get_double("svm", "unit_delay", 0.0);
    base.eps_ec_ratio = sh.ec.eps_ratio;
    base.eps_ec_absolute = sh.ec.eps_absolute;

    EvalOptions eo;
    eo.trials = ctx.trials("svm", 4000);
    eo.seed = substream(ctx.seed(), "svm/eval");
    eo.target_p_fa = c.get_double("svm", "target_p_fa", 0.01);
    eo.calibrate = c.get_bool("svm", "calibrate", true);
    if (!(eo.target_p_fa > 0 && eo.target_p_fa < 1)) config_error("[svm] target_p_fa must lie in (0, 1)");
    const double collapse_drop = c.get_double("svm", "collapse_drop", 0.05);
    const double matched_drop = c.get_double("svm", "matched_drop", 0.02);

    std::vector<SvmArchitecture> built;
    for (const auto& a : archs) {
        if (a == "serial") built.push_back(build_serial(syn.model));
        else if (a == "nmr") {
            if (n_m < 3 || n_m % 2 == 0) config_error("[svm] n_m must be odd and >= 3");
            built.push_back(build_nmr(syn.model, int(n_m)));
        } else if (a == "shannon") built.push_back(build_shannon(syn.model, sh, syn.data));
        else config_error("[svm] unknown architecture '" + a + "' (serial, nmr, shannon)");
        ctx.info("built " + a + ": " + std::to_string(built.back().network.gates.size()) + " gates");
        if (!built.back().sisc.warning.empty()) ctx.warn(built.back().sisc.warning);
    }

    EvalOptions clean_opt = eo;
    clean_opt.noiseless = true;
    const EvalResult clean = evaluate(built.front(), syn.data, base, clean_opt);
    const double clean_tp = clean.metrics.p_tp;
    ctx.summary("dataset", syn.data.provenance);
    ctx.summary("samples", double(syn.data.size()));
    ctx.summary("features", double(syn.data.n_features()));
    ctx.summary("trials", double(eo.trials));
    ctx.summary("clean_p_tp", clean_tp);
    ctx.summary("clean_p_fa", clean.metrics.p_fa);
    ctx.summary("clean_threshold", double(clean.metrics.threshold));
    ctx.summary("collapse_target", clean_tp - collapse_drop);
    ctx.summary("matched_target", clean_tp - matched_drop);

    CsvTable t;
    t.header = {"architecture", "eps_cp_avg", "p_tp", "tp_ci_low", "tp_ci_high", "p_fa", "fa_ci_low", "fa_ci_high",
                "threshold", "trials", "word_errors", "oracle_mismatches", "fusion_trim", "energy_J", "delay_s",
                "mb_J", "est_J", "ec_J"};
    std::map<std::string, double> collapse;
    for (std::size_t k = 0; k < built.size(); ++k) {
        const SvmArchitecture& arch = built[k];
        const std::string name = archs[k];
        std::vector<SweepPoint> sweep;
        for (double e : grid) {
            SvmOperatingPoint op = base;
            op.eps_cp_avg = e;
            EvalResult r = evaluate(arch, syn.data, op, eo);
            const auto& mt = r.metrics;
            const auto& en = r.energy;
            t.rows.push_back({name, fmt_double(e), fmt_double(mt.p_tp), fmt_double(mt.tp_ci.low), fmt_double(mt.tp_ci.high),
                              fmt_double(mt.p_fa), fmt_double(mt.fa_ci.low), fmt_double(mt.fa_ci.high),
                              std::to_string(mt.threshold), std::to_string(mt.trials), std::to_string(mt.word_errors),
                              std::to_string(mt.oracle_mismatches), std::to_string(mt.fusion_trim),
                              fmt_double(en.total_J), fmt_double(en.delay_s), fmt_double(en.mb_J),
                              fmt_double(en.est_J), fmt_double(en.ec_J)});
            if (mt.oracle_mismatches) ctx.warn(name + " at eps " + eps_label(e) + ": noiseless decode differs from the software score");
            if (!mt.note.empty()) ctx.warn(name + " at eps " + eps_label(e) + ": " + mt.note);
            ctx.info(name + " eps " + eps_label(e) + ": p_tp " + fmt_double(mt.p_tp) + " p_fa " + fmt_double(mt.p_fa));
            sweep.push_back({e, std::move(r)});
        }
        const double ce = crossing_epsilon(sweep, clean_tp - collapse_drop);
        const double me = crossing_epsilon(sweep, clean_tp - matched_drop);
        collapse[name] = ce;
        ctx.summary("gates_" + name, double(arch.network.gates.size()));
        ctx.summary("collapse_eps_" + name, ce);
        ctx.summary("matched_eps_" + name, me);
        double matched_energy = std::numeric_limits<double>::quiet_NaN();
        if (std::isfinite(me) && me > grid.front()) {
            SvmOperatingPoint op = base;
            op.eps_cp_avg = me;
            matched_energy = energy_at(arch, op).total_J;
        }
        ctx.summary("matched_energy_J_" + name, matched_energy);
        if (arch.style == SvmStyle::Shannon) {
            ctx.summary("ec_ratio", arch.ec_ratio());
            ctx.summary("mb_gates", double(arch.gate_count(Region::MainBlock)));
            ctx.summary("est_gates", double(arch.gate_count(Region::Estimator)));
            ctx.summary("fusion_gates", double(arch.gate_count(Region::Fusion)));
            ctx.summary("p_k", double(arch.sisc.fusion.p_k));
            ctx.summary("fusion_step", double(arch.sisc.fusion.step()));
            ctx.summary("accumulator_bits", double(arch.width));
        }
    }
    if (collapse.count("serial") && collapse.count("shannon"))
        ctx.summary("collapse_ratio_shannon_serial", collapse["shannon"] / collapse["serial"]);
    ctx.emit("svm_sweep", t);
}

}  // namespace

const std::vector<std::string>& subcommands() {
    static const std::vector<std::string> s = {"contours", "fp", "llg", "shape", "fuse-check", "svm"};
    return s;
}

std::uint64_t substream(std::uint64_t seed, const std::string& tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : tag) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return derive_seed(seed, h);
}

std::string file_digest(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw Error("harness", "cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return fnv_hex(ss.str());
}

std::string table_json(const CsvTable& t) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& r : t.rows) {
        nlohmann::ordered_json o;
        for (std::size_t k = 0; k < t.header.size(); ++k) {
            const std::string& v = k < r.size() ? r[k] : std::string();
            char* end = nullptr;
            const double d = v.empty() ? 0.0 : std::strtod(v.c_str(), &end);
            if (!v.empty() && end == v.c_str() + v.size() && std::isfinite(d)) o[t.header[k]] = d;
            else o[t.header[k]] = v;
        }
        rows.push_back(std::move(o));
    }
    return rows.dump(1) + "\n";
}

RunReport run(const RunRequest& request, std::ostream* log) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto& subs = subcommands();
    if (std::find(subs.begin(), subs.end(), request.subcommand) == subs.end())
        config_error("unknown subcommand '" + request.subcommand + "'");
    Context ctx(request, log);
    std::error_code ec;
    fs::create_directories(ctx.out_dir(), ec);
    if (ec) throw Error("harness", "cannot create output directory " + ctx.out_dir() + ": " + ec.message());

    const std::string& s = request.subcommand;
    if (s == "contours") run_contours(ctx);
    else if (s == "fp") run_fp(ctx);
    else if (s == "llg") run_llg(ctx);
    else if (s == "shape") run_shape(ctx);
    else if (s == "fuse-check") run_fuse_check(ctx);
    else run_svm(ctx);

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return ctx.finish(wall);
}

}  // namespace spinsc
