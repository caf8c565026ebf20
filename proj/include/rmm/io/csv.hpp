#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace rmm::io {

/// Shortest round-trip representation; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double v);

/// CSV with a leading "# config_hash=<hex> seed=<n>" line and a header row.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, const std::string& hash, std::uint64_t seed,
              std::vector<std::string> columns);

    CsvWriter& operator<<(double v);
    CsvWriter& operator<<(const std::string& v);
    CsvWriter& operator<<(const char* v) { return *this << std::string(v); }
    /// Ends the row; throws if the field count does not match the header.
    void end_row();
    std::size_t rows() const { return rows_; }

private:
    std::ostream& out_;
    std::size_t columns_;
    std::size_t field_ = 0;
    std::size_t rows_ = 0;
};

struct CsvTable {
    std::string comment;
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string& name) const;
    double number(std::size_t row, const std::string& name) const;
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

}  // namespace rmm::io
