#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace tcdiff::io {

/// One parsed delimited record plus the 1-based line it started on.
struct Record {
    std::vector<std::string> fields;
    std::size_t line;
};

/// RFC-4180 reader: double-quoted fields, "" escapes, embedded delimiters
/// and newlines, CRLF or LF endings. Works for CSV (',') and TSV ('\t').
/// Throws ParseError (with path:line) on unbalanced quotes.
std::vector<Record> read_delimited(const std::filesystem::path& path, char delimiter);

/// Parse delimited text held in memory; `origin` names the source in errors.
std::vector<Record> parse_delimited(const std::string& content, char delimiter,
                                    const std::string& origin);

/// Quote a field only when it needs it under RFC-4180.
std::string escape_field(const std::string& field, char delimiter);

void write_delimited(const std::filesystem::path& path,
                     const std::vector<std::vector<std::string>>& rows, char delimiter);

/// Shortest-width decimal form that round-trips a double exactly.
std::string format_double(double value);

/// strtod with full-string validation; throws ParseError naming `context`.
double parse_double(const std::string& text, const std::string& context);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& content);

}  // namespace tcdiff::io
