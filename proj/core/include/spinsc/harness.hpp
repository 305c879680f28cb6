#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "spinsc/config.hpp"
#include "spinsc/csv.hpp"

namespace spinsc {

enum class OutputFormat { Csv, Json };

// One experiment invocation. Command-line overrides take precedence over the
// config file; the effective config is echoed into the manifest.
struct RunRequest {
    std::string subcommand;
    Config config;
    std::string config_dir;  // relative file paths in the config resolve against this
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> trials;
    std::optional<OutputFormat> format;
};

struct RunReport {
    std::string out_dir;
    std::vector<std::string> files;  // data files written, relative to out_dir
    std::vector<std::string> warnings;
    std::vector<std::pair<std::string, std::string>> summary;
    double wall_time_s = 0.0;
};

const std::vector<std::string>& subcommands();

// Executes the subcommand and writes its data files plus manifest.toml.
// Throws ConfigError for invalid configuration and other spinsc::Error
// subclasses for failures while running.
RunReport run(const RunRequest& request, std::ostream* log = nullptr);

// Substream tags; every random draw of a run derives from the config seed
// through derive_seed(seed, tag).
std::uint64_t substream(std::uint64_t seed, const std::string& tag);

// 64-bit FNV-1a of a file, as 16 hex digits (recorded in the manifest).
std::string file_digest(const std::string& path);

std::string table_json(const CsvTable& t);

}  // namespace spinsc
