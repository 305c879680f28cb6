#include "spinsc/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spinsc/errors.hpp"

namespace spinsc {

int CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return int(i);
    return -1;
}

static CsvRow split_line(const std::string& line) {
    CsvRow out;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        std::size_t s = 0;
        while (s < cell.size() && cell[s] == ' ') ++s;
        out.push_back(cell.substr(s));
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

CsvTable parse_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!have_header) {
            t.header = split_line(line);
            have_header = true;
        } else {
            t.rows.push_back(split_line(line));
        }
    }
    return t;
}

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("csv", "cannot open " + path);
    return parse_csv(in);
}

void write_csv(std::ostream& out, const CsvTable& table) {
    auto put = [&](const CsvRow& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) out << ',';
            out << r[i];
        }
        out << '\n';
    };
    put(table.header);
    for (const auto& r : table.rows) put(r);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("csv", "cannot write " + path);
    write_csv(out, table);
}

std::string fmt_double(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace spinsc
