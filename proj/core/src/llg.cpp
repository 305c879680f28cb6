#include <array>
#include <cmath>
#include <random>

#include "spinsc/device_model.hpp"
#include "spinsc/errors.hpp"
#include "spinsc/rng.hpp"

namespace spinsc {

namespace {

using Vec = std::array<double, 3>;

inline Vec cross(const Vec& a, const Vec& b) {
    return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}
inline double norm(const Vec& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

// Landau-Lifshitz form in reduced time tau = alpha gamma mu0 H_k t / (1 + alpha^2),
// fields in units of H_k:
//   dm/dtau = -(1/alpha) m x h - m x (m x h) + i m x (m x z)
// with h = (m_z + h_ext) z + h_n. The spin-torque term drives m from +z towards -z,
// so the polar drift is (i - h_ext - cos theta) sin theta, as in the Fokker-Planck model.
inline Vec rhs(const Vec& m, const Vec& hn, double inv_alpha, double i, double hext) {
    const Vec h = {hn[0], hn[1], m[2] + hext + hn[2]};
    const Vec mxh = cross(m, h);
    const Vec mxmxh = cross(m, mxh);
    const Vec z = {0.0, 0.0, 1.0};
    const Vec mxmxz = cross(m, cross(m, z));
    Vec out;
    for (int k = 0; k < 3; ++k) out[k] = -inv_alpha * mxh[k] - mxmxh[k] + i * mxmxz[k];
    return out;
}

// theta0 from exp(-sigma sin^2 theta) sin theta on [0, pi/2), by rejection on u = cos theta.
double sample_theta0(std::mt19937_64& gen, double sigma) {
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (;;) {
        const double u = 1.0 - U(gen);  // (0, 1]
        if (U(gen) < std::exp(-sigma * (1.0 - u * u))) return std::acos(u);
    }
}

}  // namespace

LlgResult llg_monte_carlo(const DeviceParams& p, const DriveCondition& d, const LlgOptions& opt) {
    if (opt.trials < 100) throw DomainError("device_model", "llg_monte_carlo needs at least 100 trials");
    if (!(d.t_g > 0)) throw DomainError("device_model", "t_g must be positive");
    const double rate = p.tau_rate();
    const double dt = std::max(d.t_g / opt.steps_per_tg, opt.min_dt);
    const long steps = long(std::ceil(d.t_g / dt - 1e-9));
    const double dtau = rate * d.t_g / double(steps);
    const double a = p.alpha;
    // Thermal field: <H H> = 2 alpha kT / (mu0^2 gamma M_s V) delta(t). With V taken
    // from E_b = mu0 M_s H_k V / 2 and rescaled to tau and units of H_k, the
    // per-component variance per unit tau is alpha^2 kT / ((1 + alpha^2) E_b).
    const double q_tau = a * a / ((1.0 + a * a) * p.e_b_kT);
    const double noise_sd = opt.thermal ? std::sqrt(q_tau / dtau) : 0.0;
    const double inv_alpha = 1.0 / a;

    LlgResult res;
    res.trials = opt.trials;
    for (std::size_t t = 0; t < opt.trials; ++t) {
        std::mt19937_64 gen(derive_seed(opt.seed, t));
        std::normal_distribution<double> N(0.0, 1.0);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        const double th = opt.random_initial ? sample_theta0(gen, p.e_b_kT) : opt.theta0;
        const double ph = 2.0 * phys::pi * U(gen);
        Vec m = {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
        for (long s = 0; s < steps; ++s) {
            Vec hn = {0.0, 0.0, 0.0};
            if (opt.thermal)
                for (int k = 0; k < 3; ++k) hn[k] = noise_sd * N(gen);
            // Implicit midpoint rule m1 = m0 + dtau f((m0 + m1) / 2), solved by fixed-point
            // iteration. It is the Stratonovich-consistent scheme and keeps |m| = 1 up to
            // the iteration tolerance.
            Vec m1 = m;
            for (int it = 0; it < 50; ++it) {
                Vec mid;
                for (int k = 0; k < 3; ++k) mid[k] = 0.5 * (m[k] + m1[k]);
                const Vec f = rhs(mid, hn, inv_alpha, d.i, d.h);
                double change = 0;
                for (int k = 0; k < 3; ++k) {
                    const double nv = m[k] + dtau * f[k];
                    change = std::max(change, std::abs(nv - m1[k]));
                    m1[k] = nv;
                }
                if (change < 1e-13) break;
            }
            m = m1;
            const double nm = norm(m);
            res.max_norm_drift = std::max(res.max_norm_drift, std::abs(nm - 1.0));
            for (int k = 0; k < 3; ++k) m[k] /= nm;
        }
        if (res.max_norm_drift > 1e-6)
            throw NumericalError("device_model", "LLG step too large: |m| drifted by " +
                                                     std::to_string(res.max_norm_drift) +
                                                     " within one step; increase steps_per_tg");
        if (m[2] > 0) ++res.failures;
    }
    res.epsilon = double(res.failures) / double(res.trials);
    res.std_error = std::sqrt(std::max(res.epsilon * (1 - res.epsilon), 1e-300) / double(res.trials));
    const auto w = wilson_interval(res.failures, res.trials);
    res.ci_low = w.low;
    res.ci_high = w.high;
    return res;
}

}  // namespace spinsc
