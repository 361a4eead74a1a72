#pragma once

#include <stdexcept>
#include <string>

namespace tcdiff {

/// Input could not be parsed (bad CSV/JSONL record, malformed matrix, ...).
/// Messages carry "path:line:" prefixes where a location is known.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Invalid configuration or usage (unknown format, empty dataset, bad flag
/// combination). Maps to process exit code 2 in the CLI.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace tcdiff
