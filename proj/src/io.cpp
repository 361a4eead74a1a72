#include "tcdiff/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "tcdiff/error.hpp"

namespace tcdiff::io {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open file: " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path.string());
    out << content;
    if (!out) throw ConfigError("write failed: " + path.string());
}

std::vector<Record> parse_delimited(const std::string& content, char delimiter,
                                    const std::string& origin) {
    std::vector<Record> records;
    std::vector<std::string> fields;
    std::string field;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool quoted = false;
    bool field_started = false;  // a record with any character counts, even ""

    const auto end_field = [&] {
        fields.push_back(std::move(field));
        field.clear();
    };
    const auto end_record = [&] {
        end_field();
        // Skip blank lines (a single empty unquoted field).
        if (fields.size() != 1 || !fields[0].empty() || field_started) {
            records.push_back({std::move(fields), record_line});
        }
        fields.clear();
        field_started = false;
        record_line = line;
    };

    std::size_t i = 0;
    while (i < content.size()) {
        const char c = content[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < content.size() && content[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (c == '\n') ++line;
                field.push_back(c);
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
            field_started = true;
        } else if (c == delimiter) {
            end_field();
            field_started = true;
        } else if (c == '\n') {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            ++line;
            end_record();
        } else {
            field.push_back(c);
        }
        ++i;
    }
    if (quoted) {
        throw ParseError(origin + ":" + std::to_string(record_line) +
                         ": unterminated quoted field");
    }
    if (!field.empty() || !fields.empty() || field_started) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        end_record();
    }
    return records;
}

std::vector<Record> read_delimited(const std::filesystem::path& path, char delimiter) {
    return parse_delimited(read_file(path), delimiter, path.string());
}

std::string escape_field(const std::string& field, char delimiter) {
    const bool needs_quotes = field.find(delimiter) != std::string::npos ||
                              field.find('"') != std::string::npos ||
                              field.find('\n') != std::string::npos ||
                              field.find('\r') != std::string::npos;
    if (!needs_quotes) return field;
    std::string out = "\"";
    for (const char c : field) {
        if (c == '"') out += "\"\"";
        else out.push_back(c);
    }
    out.push_back('"');
    return out;
}

void write_delimited(const std::filesystem::path& path,
                     const std::vector<std::vector<std::string>>& rows, char delimiter) {
    std::string out;
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i > 0) out.push_back(delimiter);
            out += escape_field(row[i], delimiter);
        }
        out.push_back('\n');
    }
    write_file(path, out);
}

std::string format_double(double value) {
    // Shortest representation that parses back to the same bits.
    char buf[64];
    for (int prec = 1; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof buf, "%.*g", prec, value);
        if (std::strtod(buf, nullptr) == value) return buf;
    }
    return buf;
}

double parse_double(const std::string& text, const std::string& context) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') {
        throw ParseError(context + ": not a number: '" + text + "'");
    }
    return value;
}

}  // namespace tcdiff::io
