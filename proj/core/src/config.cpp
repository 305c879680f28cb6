#include "spinsc/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "spinsc/csv.hpp"
#include "spinsc/errors.hpp"

namespace spinsc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

// Drops a '#' comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

bool valid_name(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) return false;
    return true;
}

bool parse_number(const std::string& s, double& v) {
    if (s.empty()) return false;
    const char* b = s.data();
    const char* e = b + s.size();
    if (*b == '+') ++b;
    auto r = std::from_chars(b, e, v);
    return r.ec == std::errc() && r.ptr == e;
}

std::vector<std::string> split_array(const std::string& lit) {
    std::vector<std::string> items;
    const std::string body = trim(lit.substr(1, lit.size() - 2));
    if (body.empty()) return items;
    std::string cur;
    bool quoted = false;
    for (char c : body) {
        if (c == '"') quoted = !quoted;
        if (c == ',' && !quoted) {
            items.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    items.push_back(trim(cur));
    return items;
}

bool valid_scalar(const std::string& v) {
    double d;
    if (v == "true" || v == "false") return true;
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"') return v.find('"', 1) == v.size() - 1;
    return parse_number(v, d);
}

std::string canonical(const std::string& v) {
    if (v.size() >= 2 && v.front() == '[') {
        std::string out = "[";
        auto items = split_array(v);
        for (std::size_t i = 0; i < items.size(); ++i) out += (i ? ", " : "") + canonical(items[i]);
        return out + "]";
    }
    double d;
    if (v.front() != '"' && v != "true" && v != "false" && parse_number(v, d)) return fmt_double(d);
    return v;
}

}  // namespace

Config Config::parse(const std::string& text, const std::string& origin) {
    Config c;
    c.origin_ = origin;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    auto fail = [&](const std::string& what) {
        throw ConfigError("harness", origin + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        const std::string s = trim(strip_comment(line));
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') fail("unterminated section header");
            section = trim(s.substr(1, s.size() - 2));
            if (!valid_name(section)) fail("bad section name '" + section + "'");
            c.values_[section];
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(s.substr(0, eq));
        const std::string val = trim(s.substr(eq + 1));
        if (!valid_name(key)) fail("bad key '" + key + "'");
        if (val.empty()) fail("missing value for '" + key + "'");
        if (val.front() == '[') {
            if (val.back() != ']') fail("unterminated array for '" + key + "'");
            for (const auto& item : split_array(val))
                if (!valid_scalar(item) || item == "true" || item == "false") fail("bad array item '" + item + "' for '" + key + "'");
        } else if (!valid_scalar(val)) {
            fail("bad value '" + val + "' for '" + key + "'");
        }
        if (c.values_[section].count(key)) fail("duplicate key '" + key + "'");
        c.values_[section][key] = canonical(val);
    }
    return c;
}

Config Config::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("harness", "cannot open config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse(ss.str(), path);
}

std::string Config::emit() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [sec, kv] : values_) {
        if (!sec.empty()) {
            if (!first) os << "\n";
            os << "[" << sec << "]\n";
        }
        for (const auto& [k, v] : kv) os << k << " = " << v << "\n";
        first = false;
    }
    return os.str();
}

const std::string* Config::find(const std::string& section, const std::string& key) const {
    auto s = values_.find(section);
    if (s == values_.end()) return nullptr;
    auto k = s->second.find(key);
    if (k == s->second.end()) return nullptr;
    used_.insert(section + "." + key);
    return &k->second;
}

void Config::bad(const std::string& section, const std::string& key, const std::string& what) const {
    throw ConfigError("harness", origin_ + ": [" + section + "] " + key + " " + what);
}

bool Config::has(const std::string& section, const std::string& key) const {
    auto s = values_.find(section);
    return s != values_.end() && s->second.count(key);
}

std::string Config::get_string(const std::string& section, const std::string& key, const std::string& def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    if (v->size() < 2 || v->front() != '"') bad(section, key, "must be a quoted string");
    return v->substr(1, v->size() - 2);
}

double Config::get_double(const std::string& section, const std::string& key, double def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    double d;
    if (!parse_number(*v, d)) bad(section, key, "must be a number");
    return d;
}

std::int64_t Config::get_int(const std::string& section, const std::string& key, std::int64_t def) const {
    const double d = get_double(section, key, double(def));
    if (d != std::floor(d) || std::fabs(d) > 9.0e15) bad(section, key, "must be an integer");
    return std::int64_t(d);
}

std::uint64_t Config::get_uint(const std::string& section, const std::string& key, std::uint64_t def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    std::uint64_t u = 0;
    auto r = std::from_chars(v->data(), v->data() + v->size(), u);
    if (r.ec != std::errc() || r.ptr != v->data() + v->size()) bad(section, key, "must be a non-negative integer");
    return u;
}

bool Config::get_bool(const std::string& section, const std::string& key, bool def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    if (*v == "true") return true;
    if (*v == "false") return false;
    bad(section, key, "must be true or false");
}

std::vector<double> Config::get_doubles(const std::string& section, const std::string& key, const std::vector<double>& def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    std::vector<double> out;
    if (v->front() != '[') {
        double d;
        if (!parse_number(*v, d)) bad(section, key, "must be a number or an array of numbers");
        return {d};
    }
    for (const auto& item : split_array(*v)) {
        double d;
        if (!parse_number(item, d)) bad(section, key, "must be an array of numbers");
        out.push_back(d);
    }
    return out;
}

std::vector<std::string> Config::get_strings(const std::string& section, const std::string& key,
                                             const std::vector<std::string>& def) const {
    const std::string* v = find(section, key);
    if (!v) return def;
    std::vector<std::string> items = v->front() == '[' ? split_array(*v) : std::vector<std::string>{*v};
    for (auto& item : items) {
        if (item.size() < 2 || item.front() != '"') bad(section, key, "must be a string or an array of strings");
        item = item.substr(1, item.size() - 2);
    }
    return items;
}

void Config::set_raw(const std::string& section, const std::string& key, const std::string& literal) {
    const std::string s = "[" + section + "]\n" + key + " = " + literal + "\n";
    Config c = parse(section.empty() ? key + " = " + literal + "\n" : s, "<set>");
    values_[section][key] = c.values_[section][key];
}

void Config::set(const std::string& section, const std::string& key, double v) { values_[section][key] = fmt_double(v); }
void Config::set(const std::string& section, const std::string& key, std::int64_t v) { values_[section][key] = std::to_string(v); }
void Config::set(const std::string& section, const std::string& key, const std::string& v) {
    if (v.find('"') != std::string::npos) throw ConfigError("harness", "string values cannot contain quotes");
    values_[section][key] = "\"" + v + "\"";
}
void Config::set(const std::string& section, const std::string& key, bool v) { values_[section][key] = v ? "true" : "false"; }
void Config::set(const std::string& section, const std::string& key, const std::vector<double>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + fmt_double(v[i]);
    values_[section][key] = s + "]";
}

void Config::set(const std::string& section, const std::string& key, const std::vector<std::string>& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (v[i].find('"') != std::string::npos) throw ConfigError("harness", "string values cannot contain quotes");
        s += (i ? ", \"" : "\"") + v[i] + "\"";
    }
    values_[section][key] = s + "]";
}

void Config::mark_used(const std::string& section) const {
    auto s = values_.find(section);
    if (s == values_.end()) return;
    for (const auto& kv : s->second) used_.insert(section + "." + kv.first);
}

std::vector<std::string> Config::unused_keys() const {
    std::vector<std::string> out;
    for (const auto& [sec, kv] : values_)
        for (const auto& [k, v] : kv) {
            const std::string name = sec + "." + k;
            if (!used_.count(name)) out.push_back(sec.empty() ? k : name);
        }
    return out;
}

}  // namespace spinsc
