#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "rcp/estimators.hpp"
#include "rcp/harris.hpp"
#include "rcp/law.hpp"

namespace rcp {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

json load_config_file(const std::string& path);

// FNV-1a over the canonical (key-sorted) dump; embedded in every output file
std::string config_hash_hex(const json& config);

// {"kind": "shifted_pareto", "alpha": 1.5, "scale": 1.0} etc.
InterarrivalLaw law_from_json(const json& j);
json law_to_json(const InterarrivalLaw& law);

// {"lo": [-100], "hi": [100]}
Lattice lattice_from_json(const json& j);

// field accessors with named-field diagnostics
const json& require_field(const json& j, const std::string& key);
double require_number(const json& j, const std::string& key);
long require_integer(const json& j, const std::string& key);
double number_or(const json& j, const std::string& key, double fallback);
long integer_or(const json& j, const std::string& key, long fallback);
std::vector<double> require_number_list(const json& j, const std::string& key);

MultiscaleParams scales_from_json(const json& config);

}  // namespace rcp
