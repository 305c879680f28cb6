#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace spinsc {

// Minimal CSV helpers. Fields never contain commas in this project's formats,
// so quoting is not supported on purpose.
using CsvRow = std::vector<std::string>;

struct CsvTable {
    CsvRow header;
    std::vector<CsvRow> rows;
    int column(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::string& path);
CsvTable parse_csv(std::istream& in);
void write_csv(const std::string& path, const CsvTable& table);
void write_csv(std::ostream& out, const CsvTable& table);

// Shortest round-trip text for a double ("%.17g" trimmed); keeps outputs
// byte-stable across runs.
std::string fmt_double(double v);

}  // namespace spinsc
