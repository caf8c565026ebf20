#include "rmm/io/csv.hpp"

#include "rmm/core/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace rmm::io {

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(std::ostream& out, const std::string& hash, std::uint64_t seed,
                     std::vector<std::string> columns)
    : out_(out), columns_(columns.size()) {
    out_ << "# config_hash=" << hash << " seed=" << seed << '\n';
    for (std::size_t i = 0; i < columns.size(); ++i) out_ << (i ? "," : "") << columns[i];
    out_ << '\n';
}

CsvWriter& CsvWriter::operator<<(double v) {
    return *this << format_number(v);
}

CsvWriter& CsvWriter::operator<<(const std::string& v) {
    if (field_ >= columns_) throw ConfigError("CSV row has too many fields");
    out_ << (field_ ? "," : "") << v;
    ++field_;
    return *this;
}

void CsvWriter::end_row() {
    if (field_ != columns_) throw ConfigError("CSV row has too few fields");
    out_ << '\n';
    field_ = 0;
    ++rows_;
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream s(line);
    while (std::getline(s, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

std::size_t CsvTable::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw ConfigError("CSV has no column '" + name + "'");
}

double CsvTable::number(std::size_t row, const std::string& name) const {
    const std::string& cell = rows.at(row).at(column(name));
    if (cell == "inf") return INFINITY;
    if (cell == "-inf") return -INFINITY;
    if (cell == "nan") return NAN;
    double v = 0.0;
    auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc() || res.ptr != cell.data() + cell.size())
        throw ConfigError("CSV cell '" + cell + "' is not a number");
    return v;
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line) || line.rfind("# ", 0) != 0)
        throw ConfigError("CSV must start with a comment line");
    t.comment = line.substr(2);
    if (!std::getline(in, line)) throw ConfigError("CSV has no header");
    t.header = split(line);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto row = split(line);
        if (row.size() != t.header.size()) throw ConfigError("CSV row width does not match header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read '" + path + "'");
    return read_csv(in);
}

}  // namespace rmm::io
