#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace spinsc {

// TOML-style configuration: [section] headers, key = value lines, '#'
// comments. Values are quoted strings, numbers, true/false, or flat arrays of
// numbers or strings. Keys before the first header belong to section "".
class Config {
public:
    static Config parse(const std::string& text, const std::string& origin = "<config>");
    static Config load(const std::string& path);
    // Canonical text: sections and keys sorted, one value per line.
    std::string emit() const;

    bool has(const std::string& section, const std::string& key) const;
    std::string get_string(const std::string& section, const std::string& key, const std::string& def) const;
    double get_double(const std::string& section, const std::string& key, double def) const;
    std::int64_t get_int(const std::string& section, const std::string& key, std::int64_t def) const;
    std::uint64_t get_uint(const std::string& section, const std::string& key, std::uint64_t def) const;
    bool get_bool(const std::string& section, const std::string& key, bool def) const;
    std::vector<double> get_doubles(const std::string& section, const std::string& key, const std::vector<double>& def) const;
    std::vector<std::string> get_strings(const std::string& section, const std::string& key, const std::vector<std::string>& def) const;

    // Stores the canonical literal for a value.
    void set_raw(const std::string& section, const std::string& key, const std::string& literal);
    void set(const std::string& section, const std::string& key, double v);
    void set(const std::string& section, const std::string& key, std::int64_t v);
    void set(const std::string& section, const std::string& key, const std::string& v);
    void set(const std::string& section, const std::string& key, bool v);
    void set(const std::string& section, const std::string& key, const std::vector<double>& v);
    void set(const std::string& section, const std::string& key, const std::vector<std::string>& v);
    // Marks every key of a section as read (e.g. the manifest block of an echoed config).
    void mark_used(const std::string& section) const;

    // "section.key" for every entry never read through a getter.
    std::vector<std::string> unused_keys() const;
    const std::map<std::string, std::map<std::string, std::string>>& entries() const { return values_; }
    bool operator==(const Config& o) const { return values_ == o.values_; }

private:
    std::map<std::string, std::map<std::string, std::string>> values_;  // literal text
    std::string origin_;
    mutable std::set<std::string> used_;
    const std::string* find(const std::string& section, const std::string& key) const;
    [[noreturn]] void bad(const std::string& section, const std::string& key, const std::string& what) const;
};

}  // namespace spinsc
