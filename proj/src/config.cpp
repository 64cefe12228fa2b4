#include "rcp/config.hpp"

#include <cstdio>
#include <fstream>

namespace rcp {

json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw ConfigError("config parse error in " + path + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    return j;
}

std::string config_hash_hex(const json& config) {
    const std::string dump = config.dump();  // nlohmann::json orders keys
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : dump) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

const json& require_field(const json& j, const std::string& key) {
    auto it = j.find(key);
    if (it == j.end()) throw ConfigError("missing field \"" + key + "\"");
    return *it;
}

double require_number(const json& j, const std::string& key) {
    const json& v = require_field(j, key);
    if (!v.is_number()) throw ConfigError("field \"" + key + "\" must be a number");
    return v.get<double>();
}

long require_integer(const json& j, const std::string& key) {
    const json& v = require_field(j, key);
    if (!v.is_number_integer()) throw ConfigError("field \"" + key + "\" must be an integer");
    return v.get<long>();
}

double number_or(const json& j, const std::string& key, double fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number()) throw ConfigError("field \"" + key + "\" must be a number");
    return it->get<double>();
}

long integer_or(const json& j, const std::string& key, long fallback) {
    auto it = j.find(key);
    if (it == j.end()) return fallback;
    if (!it->is_number_integer()) throw ConfigError("field \"" + key + "\" must be an integer");
    return it->get<long>();
}

std::vector<double> require_number_list(const json& j, const std::string& key) {
    const json& v = require_field(j, key);
    if (!v.is_array() || v.empty())
        throw ConfigError("field \"" + key + "\" must be a non-empty array of numbers");
    std::vector<double> out;
    for (const auto& x : v) {
        if (!x.is_number()) throw ConfigError("field \"" + key + "\" must contain numbers only");
        out.push_back(x.get<double>());
    }
    return out;
}

InterarrivalLaw law_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field \"law\" must be an object");
    const json& kind_field = require_field(j, "kind");
    if (!kind_field.is_string()) throw ConfigError("field \"law.kind\" must be a string");
    const std::string kind = kind_field.get<std::string>();
    try {
        if (kind == "exponential") return InterarrivalLaw::exponential(require_number(j, "rate"));
        if (kind == "shifted_pareto")
            return InterarrivalLaw::shifted_pareto(require_number(j, "alpha"),
                                                   require_number(j, "scale"));
        if (kind == "weibull")
            return InterarrivalLaw::weibull(require_number(j, "shape"),
                                            require_number(j, "scale"));
        if (kind == "uniform") return InterarrivalLaw::uniform(require_number(j, "b"));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field \"law\": ") + e.what());
    }
    throw ConfigError("field \"law.kind\": unknown law \"" + kind + "\"");
}

json law_to_json(const InterarrivalLaw& law) {
    switch (law.kind()) {
        case InterarrivalLaw::Kind::Exponential:
            return {{"kind", "exponential"}, {"rate", law.param_a()}};
        case InterarrivalLaw::Kind::ShiftedPareto:
            return {{"kind", "shifted_pareto"}, {"alpha", law.param_a()}, {"scale", law.param_b()}};
        case InterarrivalLaw::Kind::Weibull:
            return {{"kind", "weibull"}, {"shape", law.param_a()}, {"scale", law.param_b()}};
        case InterarrivalLaw::Kind::UniformLaw:
            return {{"kind", "uniform"}, {"b", law.param_a()}};
    }
    return {};
}

Lattice lattice_from_json(const json& j) {
    if (!j.is_object()) throw ConfigError("field \"box\" must be an object");
    const json& lo = require_field(j, "lo");
    const json& hi = require_field(j, "hi");
    if (!lo.is_array() || !hi.is_array() || lo.size() != hi.size() || lo.empty())
        throw ConfigError("field \"box\": lo/hi must be equal-length non-empty arrays");
    std::vector<int> lov, hiv;
    for (const auto& x : lo) lov.push_back(x.get<int>());
    for (const auto& x : hi) hiv.push_back(x.get<int>());
    try {
        return Lattice(static_cast<int>(lov.size()), lov, hiv);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("field \"box\": ") + e.what());
    }
}

MultiscaleParams scales_from_json(const json& config) {
    MultiscaleParams p;
    auto it = config.find("scales");
    if (it == config.end()) return p;
    const json& s = *it;
    p.beta = number_or(s, "beta", p.beta);
    p.r = static_cast<int>(integer_or(s, "r", p.r));
    p.k = static_cast<int>(integer_or(s, "k", p.k));
    p.c = number_or(s, "c", p.c);
    p.eps = number_or(s, "eps", p.eps);
    return p;
}

}  // namespace rcp
