#include "logfold/io.hpp"

#include "logfold/error.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace logfold {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw ArgumentError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ArgumentError("cannot write file: " + tmp.string());
        out << content;
        if (!out.flush())
            throw ArgumentError("short write: " + tmp.string());
    }
    fs::rename(tmp, target);
}

std::vector<CsvRecord> parse_csv_records(const std::string& text) {
    std::vector<CsvRecord> records;
    std::size_t pos = 0, line = 1;
    // skip a UTF-8 BOM
    if (text.size() >= 3 && text.compare(0, 3, "\xEF\xBB\xBF") == 0)
        pos = 3;

    while (pos < text.size()) {
        CsvRecord rec;
        rec.line = line;
        std::string field;
        bool in_quotes = false, field_was_quoted = false, done = false;
        while (!done) {
            if (pos >= text.size()) {
                if (in_quotes)
                    throw ParseError("unterminated quoted field", rec.line);
                rec.fields.push_back(std::move(field));
                break;
            }
            const char c = text[pos++];
            if (in_quotes) {
                if (c == '"') {
                    if (pos < text.size() && text[pos] == '"') {
                        field += '"';
                        ++pos;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (c == '\n')
                        ++line;
                    field += c;
                }
                continue;
            }
            switch (c) {
            case '"':
                if (!field.empty() || field_was_quoted)
                    throw ParseError("unexpected quote inside unquoted field", line);
                in_quotes = field_was_quoted = true;
                break;
            case ',':
                rec.fields.push_back(std::move(field));
                field.clear();
                field_was_quoted = false;
                break;
            case '\r':
                break;
            case '\n':
                ++line;
                rec.fields.push_back(std::move(field));
                done = true;
                break;
            default:
                field += c;
            }
        }
        // blank lines carry no record
        if (!(rec.fields.size() == 1 && rec.fields[0].empty()))
            records.push_back(std::move(rec));
    }
    return records;
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\r\n") == std::string::npos)
        return field;
    std::string out = "\"";
    for (char c : field) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string format_fixed(double value, int precision) {
    if (!std::isfinite(value))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", precision, value);
    std::string s = buf;
    if (s == "-0" || s.find_first_not_of("-0.") == std::string::npos)
        if (!s.empty() && s[0] == '-')
            s.erase(0, 1);
    return s;
}

} // namespace logfold
