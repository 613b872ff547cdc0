#pragma once

#include "kstab/configurations.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace kstab {

// Schema violation with the JSON-pointer path of the offending element.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string path, const std::string& message)
        : std::runtime_error(path.empty() ? message : path + ": " + message),
          path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// Parsed configuration document. `kind` selects the payload: a PL function
// for "toric_pl", a vertex index and parameter c for "normal_cone", ideal
// generator exponents with c and the line-bundle degree for "flag_ideal".
struct ConfigDocument {
    int schema_version = 1;
    std::string kind;

    int dim = 0;
    std::vector<Halfspace> halfspaces;

    // toric_pl
    std::vector<AffinePiece> affines;
    Rounding rounding = Rounding::Ceil;
    bool rounding_given = false;

    // normal_cone
    int vertex = 0;
    Rat c;

    // flag_ideal
    std::vector<std::vector<Exponent>> flag_generators;
    std::int64_t degree = 1;

    // Builds the configuration object; construction failures surface as
    // SchemaError.
    Config to_config() const;
};

ConfigDocument parse_config(const std::string& text);
ConfigDocument parse_config_file(const std::string& path);

// Canonical JSON serialization; rational strings round-trip byte-exactly.
std::string emit_config(const ConfigDocument& doc);

inline constexpr const char* kToolVersion = "kstab 0.1.0";

// Header carried by every emitted file as '#' comment lines.
struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::vector<std::pair<std::string, std::string>> parameters;
    std::vector<std::pair<std::string, std::string>> columns;  // name -> type

    std::string header() const;
};

// Shortest round-trip decimal form of a float64.
std::string format_double(double v);

void write_csv(std::ostream& os, const RunManifest& manifest,
               const std::vector<std::vector<std::string>>& rows);

}  // namespace kstab
