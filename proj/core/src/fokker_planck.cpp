#include <algorithm>
#include <cmath>

#include "spinsc/csv.hpp"
#include "spinsc/device_model.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

namespace {

// Bernoulli function B(x) = x / (e^x - 1), stable near 0.
double bern(double x) {
    if (std::abs(x) < 1e-6) return 1.0 - 0.5 * x;
    return x / std::expm1(x);
}

FpState make_grid(int n) {
    if (n < 64) throw DomainError("device_model", "Fokker-Planck grid needs at least 64 nodes");
    if (n % 2) throw DomainError("device_model", "Fokker-Planck grid size must be even");
    FpState s;
    const double h = phys::pi / n;
    s.theta.resize(n);
    s.weight.resize(n);
    s.rho.assign(n, 0.0);
    for (int j = 0; j < n; ++j) {
        s.theta[j] = (j + 0.5) * h;
        s.weight[j] = std::cos(j * h) - std::cos((j + 1) * h);
    }
    return s;
}

void normalise(FpState& s) {
    const double m = s.mass();
    for (double& r : s.rho) r /= m;
}

}  // namespace

double FpState::mass() const {
    double m = 0;
    for (std::size_t j = 0; j < rho.size(); ++j) m += rho[j] * weight[j];
    return m;
}

FpState fp_initial_state(const DeviceParams& p, int n) {
    FpState s = make_grid(n);
    for (int j = 0; j < n / 2; ++j) {
        const double st = std::sin(s.theta[j]);
        s.rho[j] = std::exp(-p.e_b_kT * st * st);
    }
    normalise(s);
    return s;
}

FpState fp_equilibrium_state(const DeviceParams& p, int n) {
    FpState s = make_grid(n);
    for (int j = 0; j < n; ++j) {
        const double st = std::sin(s.theta[j]);
        s.rho[j] = std::exp(-p.e_b_kT * st * st);
    }
    normalise(s);
    return s;
}

std::vector<FpState> fp_evolve(const DeviceParams& p, const DriveCondition& d, const FpOptions& opt,
                               const FpState* start) {
    if (!(opt.dtau > 0)) throw DomainError("device_model", "dtau must be positive");
    FpState s = start ? *start : fp_initial_state(p, opt.grid_size);
    const int n = int(s.rho.size());
    const double h = phys::pi / n;
    const double diff = 1.0 / (2.0 * p.e_b_kT);  // kT / (2 E_b)

    // Face fluxes F_{j+1/2} = a_j rho_j - b_j rho_{j+1} (Scharfetter-Gummel),
    // already multiplied by sin(theta) at the face. Boundary faces carry no flux.
    std::vector<double> a(n - 1), b(n - 1);
    for (int j = 0; j < n - 1; ++j) {
        const double th = (j + 1) * h;
        const double sf = std::sin(th);
        const double v = (d.i - d.h - std::cos(th)) * sf;
        const double pe = v * h / diff;
        a[j] = sf * diff / h * bern(-pe);
        b[j] = sf * diff / h * bern(pe);
    }

    auto solve_step = [&](std::vector<double>& rho, double dt) {
        // Backward Euler: (w/dt) rho' + div F(rho') = (w/dt) rho, tridiagonal.
        std::vector<double> lo(n, 0.0), di(n, 0.0), up(n, 0.0), rhs(n);
        for (int j = 0; j < n; ++j) {
            di[j] = s.weight[j] / dt;
            rhs[j] = s.weight[j] / dt * rho[j];
            if (j < n - 1) {
                di[j] += a[j];
                up[j] = -b[j];
            }
            if (j > 0) {
                di[j] += b[j - 1];
                lo[j] = -a[j - 1];
            }
        }
        for (int j = 1; j < n; ++j) {
            const double m = lo[j] / di[j - 1];
            di[j] -= m * up[j - 1];
            rhs[j] -= m * rhs[j - 1];
        }
        rho[n - 1] = rhs[n - 1] / di[n - 1];
        for (int j = n - 2; j >= 0; --j) rho[j] = (rhs[j] - up[j] * rho[j + 1]) / di[j];
    };

    std::vector<FpState> out;
    const double mass0 = s.mass();
    std::vector<double> cps = opt.checkpoints;
    std::sort(cps.begin(), cps.end());
    for (double target : cps) {
        if (target < s.tau - 1e-15) throw DomainError("device_model", "checkpoints must not precede the start time");
        while (s.tau < target - 1e-15) {
            const double dt = std::min(opt.dtau, target - s.tau);
            solve_step(s.rho, dt);
            s.tau = (target - s.tau <= opt.dtau) ? target : s.tau + dt;
            double minr = 0;
            for (double r : s.rho) minr = std::min(minr, r);
            const double drift = std::abs(s.mass() - mass0);
            if (minr < -1e-9 || drift > 1e-4)
                throw NumericalError("device_model",
                                     "Fokker-Planck step unstable (min rho " + fmt_double(minr) +
                                         ", mass drift " + fmt_double(drift) + "); reduce dtau below " +
                                         fmt_double(opt.dtau));
        }
        out.push_back(s);
    }
    return out;
}

double fp_error_rate(const FpState& s, bool jacobian) {
    const std::size_t n = s.rho.size();
    double lower = 0, total = 0;
    const double h = phys::pi / double(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double w = jacobian ? s.weight[j] : h;
        total += s.rho[j] * w;
        if (s.theta[j] < phys::pi / 2) lower += s.rho[j] * w;
    }
    const double e = jacobian ? lower : lower / total;
    return std::clamp(e, 0.0, 1.0);
}

double fp_error_rate_at(const DeviceParams& p, const DriveCondition& d, int grid_size, double dtau) {
    FpOptions opt;
    opt.grid_size = grid_size;
    opt.dtau = dtau;
    opt.checkpoints = {p.tau_rate() * d.t_g};
    return fp_error_rate(fp_evolve(p, d, opt).back());
}

}  // namespace spinsc
