#include <doctest.h>

#include <cstdio>
#include <filesystem>

#include "spinsc/svm_bench.hpp"

using namespace spinsc;

namespace {

SyntheticSet small_set() { return synth_dataset(8, 400, 3.0, 5); }

EvalOptions noiseless(std::size_t trials) {
    EvalOptions o;
    o.trials = trials;
    o.noiseless = true;
    o.keep_scores = true;
    return o;
}

}  // namespace

TEST_CASE("synthetic data is deterministic and in range") {
    const auto a = small_set(), b = small_set();
    CHECK(a.data.x == b.data.x);
    CHECK(a.data.z == b.data.z);
    CHECK(a.model.w == b.model.w);
    CHECK(a.data.n_features() == 8);
    for (int w : a.model.w) CHECK((w >= -128 && w <= 127));
    for (int z : a.data.z) CHECK((z == 1 || z == -1));
    CHECK_THROWS(synth_dataset(8, 10, -1.0, 1));
}

TEST_CASE("dataset and model files round trip") {
    const auto s = small_set();
    const auto dir = std::filesystem::temp_directory_path() / "spinsc_unit_svm";
    std::filesystem::create_directories(dir);
    save_dataset((dir / "d.csv").string(), s.data);
    save_model((dir / "m.csv").string(), s.model);
    const Dataset d = load_dataset((dir / "d.csv").string());
    const SvmModel m = load_model((dir / "m.csv").string());
    CHECK(d.x == s.data.x);
    CHECK(d.z == s.data.z);
    CHECK(m.w == s.model.w);
    CHECK(m.b == s.model.b);
    std::filesystem::remove_all(dir);
}

TEST_CASE("noiseless architectures reproduce the software score") {
    const auto s = small_set();
    const SvmOperatingPoint op;
    for (const SvmArchitecture& arch : {build_serial(s.model), build_nmr(s.model, 3), build_nmr(s.model, 5)}) {
        const auto r = evaluate(arch, s.data, op, noiseless(400));
        CHECK(r.metrics.oracle_mismatches == 0);
        CHECK(r.metrics.word_errors == 0);
        CHECK(r.scores == r.reference);
    }
    ShannonConfig cfg;
    cfg.ec.p_k = 0;
    const auto sh = build_shannon(s.model, cfg, s.data);
    const auto r = evaluate(sh, s.data, op, noiseless(400));
    CHECK(r.metrics.oracle_mismatches == 0);
    CHECK(r.scores == r.reference);
}

TEST_CASE("one-hot weight decides on the sign of its product") {
    SvmModel m;
    m.w = {0, 1, 0};
    m.b = -100;
    Dataset d;
    for (int v : {0, 50, 99, 100, 101, 200, 255}) {
        d.x.push_back({std::uint8_t(v), std::uint8_t(v), std::uint8_t(255 - v)});
        d.z.push_back(v >= 100 ? 1 : -1);
    }
    const auto r = evaluate(build_serial(m), d, {}, noiseless(7));
    for (std::size_t t = 0; t < 7; ++t) CHECK(r.scores[t] == std::int64_t(d.x[t][1]) - 100);
}

TEST_CASE("majority vote over replica words") {
    // 0b0101, 0b0111, 0b1101 vote to 0b0101.
    int vote = 0;
    const int w[3] = {0b0101, 0b0111, 0b1101};
    for (int k = 0; k < 4; ++k) {
        int ones = 0;
        for (int r = 0; r < 3; ++r) ones += (w[r] >> k) & 1;
        vote |= (ones >= 2) << k;
    }
    CHECK(vote == 0b0101);
    CHECK_THROWS(build_nmr(small_set().model, 2));
}

TEST_CASE("energy accounting identities") {
    const auto s = small_set();
    const auto ser = build_serial(s.model);
    const auto nmr = build_nmr(s.model, 3);
    ShannonConfig cfg;
    cfg.ec.p_k = 0;
    const auto sh = build_shannon(s.model, cfg, s.data);
    for (double e : {1e-6, 1e-3, 1e-2}) {
        SvmOperatingPoint op;
        op.eps_cp_avg = e;
        const auto es = energy_at(ser, op), en = energy_at(nmr, op), eh = energy_at(sh, op);
        CHECK(en.total_J >= 3 * es.total_J);
        CHECK(en.total_J == doctest::Approx(3 * es.total_J + en.ec_J).epsilon(1e-9));
        CHECK(eh.total_J == doctest::Approx(eh.mb_J + eh.est_J + eh.ec_J).epsilon(1e-9));
        CHECK(es.total_J == doctest::Approx(es.mb_J).epsilon(1e-9));
    }
    SvmOperatingPoint lo, hi;
    lo.eps_cp_avg = 1e-6;
    hi.eps_cp_avg = 1e-2;
    CHECK(energy_at(ser, hi).total_J < energy_at(ser, lo).total_J);
}

TEST_CASE("threshold calibration pins p_FA and reports small-sample intervals") {
    std::vector<std::int64_t> scores;
    std::vector<int> labels;
    for (int k = 0; k < 1000; ++k) {
        scores.push_back(k);
        labels.push_back(k % 2 ? 1 : -1);
    }
    const auto m = classify_scores(scores, labels, true, 0.01);
    CHECK(m.p_fa <= 0.01);
    CHECK(m.calibrated);
    const auto one = classify_scores({5}, {1}, false, 0.01);
    CHECK(one.trials == 1);
    CHECK(one.tp_ci.low >= 0.0);
    CHECK(one.tp_ci.high <= 1.0);
    CHECK(one.tp_ci.high - one.tp_ci.low > 0.5);
}

TEST_CASE("crossing epsilon interpolates on a log scale") {
    std::vector<SweepPoint> sw(3);
    sw[0].eps_cp_avg = 1e-4;
    sw[0].result.metrics.p_tp = 0.9;
    sw[1].eps_cp_avg = 1e-3;
    sw[1].result.metrics.p_tp = 0.7;
    sw[2].eps_cp_avg = 1e-2;
    sw[2].result.metrics.p_tp = 0.1;
    CHECK(crossing_epsilon(sw, 0.8) == doctest::Approx(std::sqrt(1e-4 * 1e-3)));
    CHECK(crossing_epsilon(sw, 0.05) == std::numeric_limits<double>::infinity());
    CHECK(crossing_epsilon(sw, 0.95) == 1e-4);
}

TEST_CASE("evaluation is seed deterministic") {
    const auto s = small_set();
    const auto ser = build_serial(s.model);
    SvmOperatingPoint op;
    op.eps_cp_avg = 1e-3;
    EvalOptions o;
    o.trials = 300;
    o.seed = 9;
    o.keep_scores = true;
    const auto a = evaluate(ser, s.data, op, o), b = evaluate(ser, s.data, op, o);
    CHECK(a.scores == b.scores);
    CHECK(a.metrics.p_tp == b.metrics.p_tp);
}
