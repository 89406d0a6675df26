#pragma once

#include <string>
#include <vector>

namespace logfold {

std::string read_file(const std::string& path);

/// Writes to `path.tmp` and renames over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

/// RFC 4180 record splitter. Each record carries the 1-based line on which
/// it starts so parse errors can point at the file.
struct CsvRecord {
    std::vector<std::string> fields;
    std::size_t line = 0;
};
std::vector<CsvRecord> parse_csv_records(const std::string& text);

std::string csv_escape(const std::string& field);

/// Fixed-precision decimal rendering used by every report writer.
std::string format_fixed(double value, int precision = 3);

} // namespace logfold
