#include <algorithm>
#include <filesystem>
#include <fstream>

#include "halab/labcli.hpp"

namespace halab {
namespace {

const char* type_name(ParamType t) {
    switch (t) {
        case ParamType::integer: return "integer";
        case ParamType::real: return "real";
        case ParamType::rational: return "rational";
        case ParamType::boolean: return "boolean";
        case ParamType::string: return "string";
        case ParamType::integer_list: return "list of integers";
        case ParamType::rational_list: return "list of rationals";
        case ParamType::circle_map: return "circle map";
    }
    return "?";
}

// Validates and returns the canonical stored form.
Json coerce(const ParamSpec& spec, const Json& v) {
    auto bad = [&]() -> ConfigError {
        return ConfigError("parameter '" + spec.name + "' must be a " + type_name(spec.type) + ", got " + v.dump());
    };
    switch (spec.type) {
        case ParamType::integer:
            if (!v.is_number_integer()) throw bad();
            return v;
        case ParamType::real:
            if (v.is_number()) return v;
            if (v.is_string()) return parse_rational_param(v, spec.name).to_double();
            throw bad();
        case ParamType::rational:
            return parse_rational_param(v, spec.name).str();
        case ParamType::boolean:
            if (!v.is_boolean()) throw bad();
            return v;
        case ParamType::string:
            if (!v.is_string()) throw bad();
            return v;
        case ParamType::integer_list:
            if (!v.is_array()) throw bad();
            for (const auto& e : v) {
                if (!e.is_number_integer()) throw bad();
            }
            return v;
        case ParamType::rational_list: {
            if (!v.is_array()) throw bad();
            Json out = Json::array();
            for (const auto& e : v) out.push_back(parse_rational_param(e, spec.name).str());
            return out;
        }
        case ParamType::circle_map:
            try {
                (void)circle_map_from_json(v);
            } catch (const ConfigError&) {
                throw;
            } catch (const std::exception& e) {
                throw ConfigError("parameter '" + spec.name + "': " + e.what());
            }
            return v;
    }
    throw bad();
}

const Json& lookup(const std::map<std::string, Json>& values, const std::string& key) {
    auto it = values.find(key);
    if (it == values.end()) throw std::logic_error("parameter '" + key + "' not in schema");
    return it->second;
}

// "2.2" -> 11/5, exactly as written.
std::optional<Rational> parse_decimal(const std::string& text) {
    const auto dot = text.find('.');
    if (dot == std::string::npos || text.find_first_of("eE/") != std::string::npos) return std::nullopt;
    const std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const auto places = text.size() - dot - 1;
    if (places > 18) return std::nullopt;
    std::int64_t scale = 1;
    for (std::size_t i = 0; i < places; ++i) scale *= 10;
    return Rational::parse(digits) / Rational(scale);
}

}  // namespace

Rational parse_rational_param(const Json& value, const std::string& key) {
    try {
        if (value.is_number_integer()) return Rational(value.get<std::int64_t>());
        if (value.is_number_float()) {
            if (auto r = parse_decimal(value.dump())) return *r;
        }
        if (value.is_string()) {
            const auto text = value.get<std::string>();
            if (auto r = parse_decimal(text)) return *r;
            return Rational::parse(text);
        }
    } catch (const std::exception& e) {
        throw ConfigError("parameter '" + key + "': malformed rational " + value.dump() + " (" + e.what() + ")");
    }
    throw ConfigError("parameter '" + key + "': expected a rational \"p/q\", got " + value.dump());
}

CircleMap circle_map_from_json(const Json& value) {
    if (value.is_string()) {
        const auto name = value.get<std::string>();
        if (name == "tent") {
            return CircleMap({Rational(0), Rational(1, 2), Rational(1)}, {Rational(1), Rational(-1)}, Rational(0), 0);
        }
        if (name == "linear") return CircleMap::linear(1);
        throw ConfigError("unknown circle map name '" + name + "' (expected tent or linear)");
    }
    if (!value.is_object()) throw ConfigError("circle map must be an object or a name");
    for (const auto& [k, v] : value.items()) {
        if (k != "breakpoints" && k != "slopes" && k != "offset" && k != "winding") {
            throw ConfigError("circle map: unknown key '" + k + "'");
        }
    }
    if (!value.contains("breakpoints") || !value.contains("slopes")) {
        throw ConfigError("circle map needs breakpoints and slopes");
    }
    auto rationals = [](const Json& arr, const char* what) {
        if (!arr.is_array()) throw ConfigError(std::string("circle map: ") + what + " must be a list");
        std::vector<Rational> out;
        for (const auto& e : arr) out.push_back(parse_rational_param(e, what));
        return out;
    };
    const Rational offset = value.contains("offset") ? parse_rational_param(value["offset"], "offset") : Rational(0);
    std::int64_t winding = 0;
    if (value.contains("winding")) {
        if (!value["winding"].is_number_integer()) throw ConfigError("circle map: winding must be an integer");
        winding = value["winding"].get<std::int64_t>();
    }
    try {
        return CircleMap(rationals(value["breakpoints"], "breakpoints"), rationals(value["slopes"], "slopes"), offset,
                         winding);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("circle map: ") + e.what());
    }
}

Json circle_map_to_json(const CircleMap& phi) {
    Json bp = Json::array(), sl = Json::array();
    for (const auto& b : phi.breakpoints()) bp.push_back(b.str());
    for (const auto& s : phi.slopes()) sl.push_back(s.str());
    return {{"breakpoints", bp}, {"slopes", sl}, {"offset", phi.offset().str()}, {"winding", phi.winding()}};
}

Params bind_params(const std::vector<ParamSpec>& schema, const Json& params) {
    if (!params.is_object()) throw ConfigError("parameters must form a JSON object");
    for (const auto& [key, _] : params.items()) {
        const bool known = std::any_of(schema.begin(), schema.end(), [&](const ParamSpec& s) { return s.name == key; });
        if (!known) throw ConfigError("unknown parameter '" + key + "'");
    }
    Params p;
    for (const auto& spec : schema) {
        const Json& v = params.contains(spec.name) ? params[spec.name] : spec.fallback;
        p.values_[spec.name] = coerce(spec, v);
    }
    return p;
}

std::int64_t Params::integer(const std::string& key) const { return lookup(values_, key).get<std::int64_t>(); }
double Params::real(const std::string& key) const { return lookup(values_, key).get<double>(); }
Rational Params::rational(const std::string& key) const { return Rational::parse(lookup(values_, key).get<std::string>()); }
bool Params::boolean(const std::string& key) const { return lookup(values_, key).get<bool>(); }
std::string Params::string(const std::string& key) const { return lookup(values_, key).get<std::string>(); }
std::vector<std::int64_t> Params::integers(const std::string& key) const {
    return lookup(values_, key).get<std::vector<std::int64_t>>();
}
std::vector<Rational> Params::rationals(const std::string& key) const {
    std::vector<Rational> out;
    for (const auto& e : lookup(values_, key)) out.push_back(Rational::parse(e.get<std::string>()));
    return out;
}
CircleMap Params::circle_map(const std::string& key) const { return circle_map_from_json(lookup(values_, key)); }
const Json& Params::raw(const std::string& key) const { return lookup(values_, key); }

ExperimentConfig ExperimentConfig::from_json(const Json& doc) {
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig c;
    c.raw = doc;
    for (const auto& [key, v] : doc.items()) {
        if (key == "experiment") {
            if (!v.is_string()) throw ConfigError("'experiment' must be a string");
            c.experiment = v.get<std::string>();
        } else if (key == "seed") {
            if (!v.is_number_integer()) throw ConfigError("'seed' must be an integer");
            c.seed = v.is_number_unsigned() ? v.get<std::uint64_t>() : static_cast<std::uint64_t>(v.get<std::int64_t>());
        } else if (key == "output") {
            if (!v.is_string()) throw ConfigError("'output' must be a string");
            c.output = v.get<std::string>();
        } else {
            c.params[key] = v;
        }
    }
    return c;
}

void write_outputs(const Report& report, const std::string& dir, const std::string& timestamp) {
    std::filesystem::create_directories(dir);
    const auto base = std::filesystem::path(dir) / report.experiment();
    std::ofstream json(base.string() + ".json");
    json << report.document(timestamp).dump(2) << '\n';
    std::ofstream csv(base.string() + ".csv");
    csv << report.csv();
    if (!json || !csv) throw std::runtime_error("failed to write report files under " + dir);
}

}  // namespace halab
