// Configuration file parsing and validation.
//
// The file is a sectioned key = value format (TOML-style scalars and
// arrays). Unknown sections and keys are rejected; every problem is
// reported as a line-numbered diagnostic rather than a partial config.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "honeyroles/engine.hpp"

namespace honeyroles {

struct Diagnostic {
    int line = 0;
    std::string message;

    std::string str() const { return "line " + std::to_string(line) + ": " + message; }
};

struct ConfigResult {
    std::optional<SimConfig> config;  // set only when diagnostics is empty
    std::vector<Diagnostic> diagnostics;

    bool ok() const { return config.has_value(); }
};

// Parses and validates; defaults fill everything the file leaves out.
// `base_dir` resolves relative gml paths.
ConfigResult validate_config(const std::string& text, const std::string& base_dir = ".");

ConfigResult load_config_file(const std::string& path);

}  // namespace honeyroles
