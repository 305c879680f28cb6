#include "spinsc/device_model.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "spinsc/csv.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

int gate_arity(GateKind k) {
    switch (k) {
        case GateKind::MAJ3:
        case GateKind::MIN3: return 3;
        case GateKind::INV:
        case GateKind::BUF: return 1;
        default: return 0;
    }
}

double energy_coefficient(GateKind k) {
    switch (k) {
        case GateKind::MAJ3:
        case GateKind::MIN3: return 3.0;
        case GateKind::INV:
        case GateKind::BUF: return 1.0;
        default: return 0.0;
    }
}

const char* to_string(GateKind k) {
    switch (k) {
        case GateKind::MAJ3: return "MAJ3";
        case GateKind::MIN3: return "MIN3";
        case GateKind::INV: return "INV";
        case GateKind::BUF: return "BUF";
        case GateKind::CONST0: return "CONST0";
        case GateKind::CONST1: return "CONST1";
    }
    return "?";
}

GateKind gate_kind_from_string(const std::string& s) {
    static const std::map<std::string, GateKind> m = {
        {"MAJ3", GateKind::MAJ3},     {"MIN3", GateKind::MIN3}, {"INV", GateKind::INV},
        {"BUF", GateKind::BUF},       {"CONST0", GateKind::CONST0},
        {"CONST1", GateKind::CONST1}};
    auto it = m.find(s);
    if (it == m.end()) throw ConfigError("netlist", "unknown gate kind '" + s + "'");
    return it->second;
}

bool is_constant(GateKind k) { return k == GateKind::CONST0 || k == GateKind::CONST1; }

// ---------------------------------------------------------------- DeviceParams

double DeviceParams::kT() const { return phys::k_B * temperature; }
double DeviceParams::e_b() const { return e_b_kT * kT(); }
double DeviceParams::volume() const { return magnet_width * magnet_length * magnet_thickness; }
double DeviceParams::r_spin() const { return ra / (magnet_width * magnet_length); }

double DeviceParams::i_crit_A() const {
    if (i_crit > 0) return i_crit;
    return 4.0 * phys::q_e * alpha * e_b() / (phys::hbar * polarization);
}

double DeviceParams::n_s_value() const {
    if (n_s > 0) return n_s;
    return m_s * volume() / phys::mu_B;
}

double DeviceParams::tau_rate() const {
    return alpha * phys::gamma_e * phys::mu0 * h_k / (1.0 + alpha * alpha);
}

void DeviceParams::validate() const {
    auto pos = [](double v, const char* name) {
        if (!(v > 0) || !std::isfinite(v))
            throw ConfigError("device_model", std::string(name) + " must be positive and finite");
    };
    pos(e_b_kT, "e_b");
    pos(h_k, "h_k");
    pos(m_s, "m_s");
    pos(ra, "ra");
    pos(temperature, "temperature");
    pos(magnet_width, "magnet_width");
    pos(magnet_length, "magnet_length");
    pos(magnet_thickness, "magnet_thickness");
    pos(channel_length, "channel_length");
    pos(channel_thickness, "channel_thickness");
    pos(lead_thickness, "lead_thickness");
    pos(lead_length, "lead_length");
    if (!(alpha > 0 && alpha < 1)) throw ConfigError("device_model", "alpha must lie in (0, 1)");
    if (!(polarization > 0 && polarization <= 1))
        throw ConfigError("device_model", "polarization must lie in (0, 1]");
    if (i_crit < 0 || n_s < 0)
        throw ConfigError("device_model", "i_crit and n_s must be positive (or 0 to derive)");
}

namespace {

using Field = double DeviceParams::*;
const std::vector<std::pair<std::string, Field>>& param_fields() {
    static const std::vector<std::pair<std::string, Field>> f = {
        {"h_k", &DeviceParams::h_k},
        {"m_s", &DeviceParams::m_s},
        {"alpha", &DeviceParams::alpha},
        {"ra", &DeviceParams::ra},
        {"temperature", &DeviceParams::temperature},
        {"magnet_width", &DeviceParams::magnet_width},
        {"magnet_length", &DeviceParams::magnet_length},
        {"magnet_thickness", &DeviceParams::magnet_thickness},
        {"polarization", &DeviceParams::polarization},
        {"channel_length", &DeviceParams::channel_length},
        {"channel_thickness", &DeviceParams::channel_thickness},
        {"lead_thickness", &DeviceParams::lead_thickness},
        {"lead_length", &DeviceParams::lead_length},
        {"i_crit", &DeviceParams::i_crit},
        {"n_s", &DeviceParams::n_s},
    };
    return f;
}

double parse_number(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw ConfigError("device_model", "bad value for '" + key + "': " + text);
    }
    if (used != text.size()) throw ConfigError("device_model", "trailing text for '" + key + "': " + text);
    return v;
}

std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

}  // namespace

DeviceParams parse_device_params(std::istream& in) {
    DeviceParams p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) eq = line.find(' ');
        if (eq == std::string::npos)
            throw ConfigError("device_model", "line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        if (key == "e_b") {
            // "52kT" (multiples of kT) or a plain number in joules
            if (val.size() > 2 && val.substr(val.size() - 2) == "kT") {
                p.e_b_kT = parse_number(key, trim(val.substr(0, val.size() - 2)));
            } else {
                double joules = parse_number(key, val);
                p.e_b_kT = -joules;  // resolved after temperature is known
            }
            continue;
        }
        if (key == "e_b_kT") {
            p.e_b_kT = parse_number(key, val);
            continue;
        }
        bool found = false;
        for (const auto& [name, field] : param_fields()) {
            if (name == key) {
                p.*field = parse_number(key, val);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("device_model", "unknown parameter '" + key + "'");
    }
    if (p.e_b_kT < 0) p.e_b_kT = -p.e_b_kT / p.kT();
    p.validate();
    return p;
}

DeviceParams load_device_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("device_model", "cannot open device parameter file " + path);
    return parse_device_params(in);
}

void write_device_params(std::ostream& out, const DeviceParams& p) {
    out << "e_b = " << fmt_double(p.e_b_kT) << "kT\n";
    for (const auto& [name, field] : param_fields()) out << name << " = " << fmt_double(p.*field) << "\n";
}

void save_device_params(const std::string& path, const DeviceParams& p) {
    std::ofstream out(path);
    if (!out) throw Error("device_model", "cannot write " + path);
    write_device_params(out, p);
}

// ---------------------------------------------------------------- closed form

double closed_form_error_rate(const DeviceParams& p, const DriveCondition& d) {
    if (!(d.i > 1.0))
        throw DomainError("device_model",
                          "closed-form error rate needs overdrive i = I/I_crit > 1 (got " +
                              fmt_double(d.i) + ")");
    if (d.t_g < 0) throw DomainError("device_model", "gate delay t_g must be >= 0");
    const double a = phys::pi * phys::pi * p.e_b_kT / 4.0;
    const double y = 2.0 * p.tau_rate() * d.t_g * (d.i - 1.0);
    // log(i e^y - 1) without overflow
    const double log_den = y + std::log(d.i) + std::log1p(-std::exp(-y) / d.i);
    const double x = std::exp(std::log(a * (d.i - 1.0)) - log_den);
    return -std::expm1(-x);
}

double isok_error_rate(const DeviceParams& p, double i_times_tg) {
    const double a = phys::pi * phys::pi * p.e_b_kT / 4.0;
    const double x = a * std::exp(-2.0 * p.tau_rate() * i_times_tg);
    return -std::expm1(-x);
}

double isok_drive_product(const DeviceParams& p, double eps) {
    if (!(eps > 0 && eps < 1)) throw DomainError("device_model", "target epsilon must lie in (0, 1)");
    const double a = phys::pi * phys::pi * p.e_b_kT / 4.0;
    const double x = -std::log1p(-eps);
    return std::log(a / x) / (2.0 * p.tau_rate());
}

double gate_energy(const DeviceParams& p, double current, double t_g, GateKind kind) {
    return energy_coefficient(kind) * current * current * p.r_spin() * t_g;
}

double supply_current_from_energy(const DeviceParams& p, double energy, double t_g, GateKind kind) {
    if (!(energy > 0) || !(t_g > 0))
        throw DomainError("device_model", "energy and delay must be positive");
    const double c = energy_coefficient(kind);
    if (c <= 0) throw DomainError("device_model", "constant gates have no switching energy");
    return std::sqrt(energy / (c * p.r_spin() * t_g));
}

double error_rate_from_energy_delay(const DeviceParams& p, double energy, double t_g, GateKind kind) {
    const double current = supply_current_from_energy(p, energy, t_g, kind);
    return closed_form_error_rate(p, {current / p.i_crit_A(), 0.0, t_g});
}

// ---------------------------------------------------------------- inversion

namespace {

// Bisection on a monotone non-increasing f over [lo, hi] in log space.
double bisect_decreasing(const std::function<double(double)>& f, double target, double lo, double hi,
                         bool logspace) {
    for (int it = 0; it < 400; ++it) {
        double mid = logspace ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
        if (f(mid) > target)
            lo = mid;
        else
            hi = mid;
        if ((logspace && hi / lo < 1 + 1e-14) || (!logspace && hi - lo < 1e-15 * hi)) break;
    }
    return logspace ? std::sqrt(lo * hi) : 0.5 * (lo + hi);
}

}  // namespace

OperatingPoint solve_operating_point(const DeviceParams& p, double target_eps, FixedQuantity fixed,
                                     double value) {
    if (!(value > 0) && !(fixed == FixedQuantity::Delay && value == 0))
        throw DomainError("device_model", "fixed quantity must be positive");
    if (!(target_eps > 0 && target_eps <= 1))
        throw DomainError("device_model", "target epsilon must lie in (0, 1)");
    OperatingPoint op;
    const double icrit = p.i_crit_A();
    if (fixed == FixedQuantity::Delay) {
        const double t = value;
        if (t == 0.0 || target_eps == 1.0) {
            // eps(t = 0) does not depend on i; any overdrive works.
            op.drive = {1.0 + 1e-9, 0.0, t};
            op.note = "degenerate: epsilon is independent of i at t_g = 0; returning lower boundary";
        } else {
            auto f = [&](double i) { return closed_form_error_rate(p, {i, 0.0, t}); };
            const double lo = 1.0 + 1e-12;
            const double eps_max = f(lo);
            if (target_eps >= eps_max)
                throw DomainError("device_model",
                                  "target epsilon " + fmt_double(target_eps) +
                                      " is above the largest value reachable at this delay (" +
                                      fmt_double(eps_max) + ")");
            double hi = 2.0;
            while (f(hi) > target_eps) {
                hi *= 2.0;
                if (hi > 1e12)
                    throw DomainError("device_model", "unreachable target epsilon " + fmt_double(target_eps));
            }
            op.drive = {bisect_decreasing(f, target_eps, lo, hi, false), 0.0, t};
        }
    } else {
        const double i = value;
        if (!(i > 1)) throw DomainError("device_model", "fixed overdrive must exceed 1");
        auto f = [&](double t) { return closed_form_error_rate(p, {i, 0.0, t}); };
        const double eps0 = f(0.0);
        if (target_eps >= eps0) {
            op.drive = {i, 0.0, 0.0};
            op.note = "degenerate: target at or above the t_g = 0 limit";
        } else {
            double lo = 1e-15, hi = 1e-12;
            while (f(hi) > target_eps) {
                hi *= 2.0;
                if (hi > 1.0)
                    throw DomainError("device_model", "unreachable target epsilon " + fmt_double(target_eps));
            }
            op.drive = {i, 0.0, bisect_decreasing(f, target_eps, lo, hi, true)};
        }
    }
    op.current = op.drive.i * icrit;
    op.energy_inverter = gate_energy(p, op.current, op.drive.t_g, GateKind::INV);
    op.epsilon = closed_form_error_rate(p, op.drive);
    return op;
}

// ---------------------------------------------------------------- contours

std::vector<ContourPoint> energy_delay_grid(const DeviceParams& p, double e_min, double e_max, int n_e,
                                            double t_min, double t_max, int n_t) {
    if (n_e < 1 || n_t < 1 || !(e_min > 0) || !(e_max >= e_min) || !(t_min > 0) || !(t_max >= t_min))
        throw ConfigError("device_model", "contour grid must be non-empty with positive bounds");
    std::vector<ContourPoint> out;
    out.reserve(std::size_t(n_e) * n_t);
    auto lg = [](double lo, double hi, int n, int k) {
        return n == 1 ? lo : lo * std::pow(hi / lo, double(k) / (n - 1));
    };
    for (int a = 0; a < n_t; ++a) {
        const double t = lg(t_min, t_max, n_t, a);
        for (int b = 0; b < n_e; ++b) {
            const double e = lg(e_min, e_max, n_e, b);
            const double i = supply_current_from_energy(p, e, t, GateKind::INV) / p.i_crit_A();
            const double eps = i > 1 ? closed_form_error_rate(p, {i, 0.0, t}) : 1.0;
            out.push_back({e, t, eps});
        }
    }
    return out;
}

WilsonInterval wilson_interval(std::size_t k, std::size_t n, double z) {
    if (n == 0) return {0.0, 1.0};
    const double nn = double(n);
    const double ph = double(k) / nn;
    const double z2 = z * z;
    const double den = 1 + z2 / nn;
    const double centre = (ph + z2 / (2 * nn)) / den;
    const double half = z * std::sqrt(ph * (1 - ph) / nn + z2 / (4 * nn * nn)) / den;
    return {std::max(0.0, centre - half), std::min(1.0, centre + half)};
}

}  // namespace spinsc
