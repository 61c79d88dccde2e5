#include "honeyroles/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace honeyroles {

namespace {

struct RawValue {
    enum Kind { String, Number, Boolean, Array } kind = String;
    std::string text;
    double number = 0.0;
    bool is_integer = false;
    unsigned long long integer = 0;
    bool boolean = false;
    std::vector<RawValue> items;
    int line = 0;
};

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

// Strips a trailing comment that is not inside a quoted string.
std::string strip_comment(const std::string& s) {
    bool quoted = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] == '"') quoted = !quoted;
        if (s[i] == '#' && !quoted) return s.substr(0, i);
    }
    return s;
}

std::optional<RawValue> parse_scalar(const std::string& text, int line) {
    RawValue value;
    value.line = line;
    const std::string t = trim(text);
    if (t.empty()) return std::nullopt;
    if (t.front() == '"') {
        if (t.size() < 2 || t.back() != '"') return std::nullopt;
        value.kind = RawValue::String;
        value.text = t.substr(1, t.size() - 2);
        return value;
    }
    if (t == "true" || t == "false") {
        value.kind = RawValue::Boolean;
        value.boolean = t == "true";
        return value;
    }
    char* end = nullptr;
    const double num = std::strtod(t.c_str(), &end);
    if (end && *end == '\0') {
        value.kind = RawValue::Number;
        value.number = num;
        if (t.find_first_of(".eE") == std::string::npos) {
            value.is_integer = true;
            value.integer = std::strtoull(t.c_str(), nullptr, 10);
        }
        value.text = t;
        return value;
    }
    return std::nullopt;
}

std::optional<RawValue> parse_value(const std::string& text, int line) {
    const std::string t = trim(text);
    if (!t.empty() && t.front() == '[') {
        if (t.back() != ']') return std::nullopt;
        RawValue value;
        value.kind = RawValue::Array;
        value.line = line;
        const std::string inner = trim(t.substr(1, t.size() - 2));
        if (inner.empty()) return value;
        std::size_t start = 0;
        bool quoted = false;
        for (std::size_t i = 0; i <= inner.size(); ++i) {
            if (i < inner.size() && inner[i] == '"') quoted = !quoted;
            if (i == inner.size() || (inner[i] == ',' && !quoted)) {
                auto item = parse_scalar(inner.substr(start, i - start), line);
                if (!item) return std::nullopt;
                value.items.push_back(*item);
                start = i + 1;
            }
        }
        return value;
    }
    return parse_scalar(t, line);
}

class Checker {
public:
    explicit Checker(std::vector<Diagnostic>& diags) : diags_(diags) {}

    void error(int line, const std::string& message) { diags_.push_back({line, message}); }

    std::optional<int> positive_int(const RawValue& v, const std::string& key) {
        if (v.kind != RawValue::Number || !v.is_integer || v.number < 1) {
            error(v.line, key + " must be a positive integer");
            return std::nullopt;
        }
        return static_cast<int>(v.integer);
    }

    std::optional<int> bounded_int(const RawValue& v, const std::string& key, int lo, int hi) {
        if (v.kind != RawValue::Number || !v.is_integer || v.number < lo || v.number > hi) {
            error(v.line, key + " must be an integer in [" + std::to_string(lo) + ", " +
                              std::to_string(hi) + "]");
            return std::nullopt;
        }
        return static_cast<int>(v.integer);
    }

    std::optional<double> real(const RawValue& v, const std::string& key) {
        if (v.kind != RawValue::Number) {
            error(v.line, key + " must be a number");
            return std::nullopt;
        }
        return v.number;
    }

    std::optional<bool> boolean(const RawValue& v, const std::string& key) {
        if (v.kind != RawValue::Boolean) {
            error(v.line, key + " must be true or false");
            return std::nullopt;
        }
        return v.boolean;
    }

    std::optional<std::string> string(const RawValue& v, const std::string& key) {
        if (v.kind != RawValue::String) {
            error(v.line, key + " must be a quoted string");
            return std::nullopt;
        }
        return v.text;
    }

private:
    std::vector<Diagnostic>& diags_;
};

const std::map<std::string, std::vector<std::string>> kSchema = {
    {"environment", {"roles", "rounds", "round_length", "topology"}},
    {"nodes", {"real", "honey_factor", "servers", "honey_ratio"}},
    {"paths", {"mode", "max_extra_hops", "max_overlap"}},
    {"adversary",
     {"compromised", "target_role", "confidence_init", "confidence_cap", "increase_weight"}},
    {"detector", {"timeout", "delta", "noise", "adaptive"}},
    {"bms", {"beta", "prism_counter_init", "threshold"}},
    {"run", {"samples", "master_seed"}},
};

}  // namespace

ConfigResult validate_config(const std::string& text, const std::string& base_dir) {
    ConfigResult result;
    Checker check(result.diagnostics);

    // parse pass: section/key/value triples
    std::map<std::pair<std::string, std::string>, RawValue> values;
    std::string section;
    std::istringstream in(text);
    std::string raw_line;
    int line_no = 0;
    int section_line = 0;
    while (std::getline(in, raw_line)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw_line));
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']') {
                check.error(line_no, "malformed section header");
                continue;
            }
            section = trim(line.substr(1, line.size() - 2));
            section_line = line_no;
            if (!kSchema.count(section)) check.error(line_no, "unknown section [" + section + "]");
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            check.error(line_no, "expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        if (section.empty()) {
            check.error(line_no, "key '" + key + "' outside any section");
            continue;
        }
        const auto schema_it = kSchema.find(section);
        if (schema_it != kSchema.end()) {
            const auto& keys = schema_it->second;
            if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                check.error(line_no, "unknown key '" + key + "' in section [" + section + "]");
                continue;
            }
        } else {
            continue;  // already reported the section
        }
        auto value = parse_value(line.substr(eq + 1), line_no);
        if (!value) {
            check.error(line_no, "cannot parse value for '" + key + "'");
            continue;
        }
        if (values.count({section, key})) {
            check.error(line_no, "duplicate key '" + key + "'");
            continue;
        }
        values.emplace(std::make_pair(section, key), std::move(*value));
    }
    (void)section_line;

    SimConfig cfg;
    const auto get = [&](const std::string& sec, const std::string& key) -> const RawValue* {
        const auto it = values.find({sec, key});
        return it == values.end() ? nullptr : &it->second;
    };

    if (const auto* v = get("environment", "roles"))
        if (auto x = check.positive_int(*v, "roles")) cfg.roles = *x;
    if (const auto* v = get("environment", "rounds"))
        if (auto x = check.positive_int(*v, "rounds")) cfg.rounds = *x;
    if (const auto* v = get("environment", "round_length"))
        if (auto x = check.positive_int(*v, "round_length")) cfg.round_length = *x;
    if (const auto* v = get("environment", "topology")) {
        if (auto name = check.string(*v, "topology")) {
            if (name->rfind("gml=", 0) == 0 || name->rfind("gml:", 0) == 0) {
                std::string path = name->substr(4);
                if (!path.empty() && path.front() != '/') path = base_dir + "/" + path;
                std::ifstream gml(path);
                if (!gml) {
                    check.error(v->line, "cannot open gml file '" + path + "'");
                } else {
                    std::stringstream buffer;
                    buffer << gml.rdbuf();
                    try {
                        load_gml(buffer.str());  // surface parse errors now
                        cfg.gml_text = buffer.str();
                    } catch (const GmlError& err) {
                        check.error(v->line, std::string("gml: ") + err.what());
                    }
                }
            } else if (!topology_preset(*name)) {
                check.error(v->line, "unknown topology preset '" + *name + "'");
            } else {
                cfg.topology_preset = *name;
            }
        }
    }

    if (const auto* v = get("nodes", "real"))
        if (auto x = check.positive_int(*v, "real")) cfg.real_hosts = *x;
    if (const auto* v = get("nodes", "honey_factor")) {
        if (auto x = check.real(*v, "honey_factor")) {
            if (*x < 0) check.error(v->line, "honey_factor must be non-negative");
            else cfg.honey_factor = *x;
        }
    }
    if (const auto* v = get("nodes", "servers"))
        if (auto x = check.positive_int(*v, "servers")) cfg.servers = *x;
    if (const auto* v = get("nodes", "honey_ratio")) {
        if (auto x = check.real(*v, "honey_ratio")) {
            if (*x < 0 || *x > 1) check.error(v->line, "honey_ratio must lie in [0, 1]");
            else cfg.honey_ratio = *x;
        }
    }

    if (const auto* v = get("paths", "mode")) {
        if (auto mode = check.string(*v, "mode")) {
            if (*mode == "disjoint") cfg.path_policy.mode = PathMode::DisjointOnly;
            else if (*mode == "disjoint-plus-nonoptimal")
                cfg.path_policy.mode = PathMode::DisjointPlusNonOptimal;
            else if (*mode == "overlap-tolerant") cfg.path_policy.mode = PathMode::OverlapTolerant;
            else
                check.error(v->line, "mode must be one of disjoint, disjoint-plus-nonoptimal, "
                                     "overlap-tolerant");
        }
    }
    if (const auto* v = get("paths", "max_extra_hops")) {
        if (auto x = check.bounded_int(*v, "max_extra_hops", 0, 16)) cfg.path_policy.max_extra_hops = *x;
    }
    if (const auto* v = get("paths", "max_overlap")) {
        if (auto x = check.real(*v, "max_overlap")) {
            if (*x < 0 || *x > 1) check.error(v->line, "max_overlap must lie in [0, 1]");
            else cfg.path_policy.max_overlap_fraction = *x;
        }
    }

    if (const auto* v = get("adversary", "compromised")) {
        if (v->kind != RawValue::Array) {
            check.error(v->line, "compromised must be an array of selectors");
        } else {
            for (const auto& item : v->items) {
                if (item.kind == RawValue::String) cfg.compromised_selectors.push_back(item.text);
                else if (item.kind == RawValue::Number && item.is_integer)
                    cfg.compromised_selectors.push_back(std::to_string(item.integer));
                else check.error(item.line, "compromised entries must be selectors or switch ids");
            }
        }
    }
    if (const auto* v = get("adversary", "target_role"))
        if (auto x = check.bounded_int(*v, "target_role", 0, 1 << 20)) cfg.target_role = *x;
    if (const auto* v = get("adversary", "confidence_init"))
        if (auto x = check.bounded_int(*v, "confidence_init", 0, 100)) cfg.confidence_init = *x;
    if (const auto* v = get("adversary", "confidence_cap"))
        if (auto x = check.bounded_int(*v, "confidence_cap", 0, 100)) cfg.confidence_cap = *x;
    if (const auto* v = get("adversary", "increase_weight")) {
        if (auto x = check.real(*v, "increase_weight")) {
            if (*x <= 0 || *x >= 1) check.error(v->line, "increase_weight must lie strictly between 0 and 1");
            else cfg.increase_weight = *x;
        }
    }

    if (const auto* v = get("detector", "timeout")) {
        if (auto x = check.real(*v, "timeout")) {
            if (*x <= 0) check.error(v->line, "timeout must be positive");
            else cfg.detector.estimated_timeout = *x;
        }
    }
    if (const auto* v = get("detector", "delta")) {
        if (auto x = check.real(*v, "delta")) {
            if (*x < 0) check.error(v->line, "delta must be non-negative");
            else cfg.detector.timeout_increment = *x;
        }
    }
    if (const auto* v = get("detector", "noise")) {
        if (auto x = check.real(*v, "noise")) {
            if (*x < 0 || *x >= 1) check.error(v->line, "noise must lie in [0, 1)");
            else cfg.detector.benign_drop_probability = *x;
        }
    }
    if (const auto* v = get("detector", "adaptive"))
        if (auto x = check.boolean(*v, "adaptive")) cfg.detector.adaptive_timeout = *x;

    if (const auto* v = get("bms", "beta")) {
        if (auto x = check.real(*v, "beta")) {
            if (!(*x > 0 && *x < 1)) check.error(v->line, "beta must lie strictly between 0 and 1");
            else cfg.beta = *x;
        }
    }
    if (const auto* v = get("bms", "prism_counter_init"))
        if (auto x = check.boolean(*v, "prism_counter_init")) cfg.prism_counter_init = *x;
    if (const auto* v = get("bms", "threshold")) {
        if (auto x = check.real(*v, "threshold")) cfg.risk_threshold = *x;
    }

    if (const auto* v = get("run", "samples"))
        if (auto x = check.positive_int(*v, "samples")) cfg.samples = *x;
    if (const auto* v = get("run", "master_seed")) {
        if (v->kind != RawValue::Number || !v->is_integer)
            check.error(v->line, "master_seed must be a non-negative integer");
        else cfg.master_seed = v->integer;
    }

    if (cfg.target_role >= cfg.roles)
        check.error(0, "target_role " + std::to_string(cfg.target_role) + " requires at least " +
                           std::to_string(cfg.target_role + 1) + " roles");
    if (cfg.confidence_init > cfg.confidence_cap)
        check.error(0, "confidence_init must not exceed confidence_cap");

    // selectors resolve against the concrete topology
    if (result.diagnostics.empty()) {
        try {
            const Topology topo = build_topology(cfg);
            resolve_compromised(cfg, topo);
        } catch (const std::exception& err) {
            check.error(0, err.what());
        }
    }

    if (result.diagnostics.empty()) result.config = cfg;
    return result;
}

ConfigResult load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        ConfigResult result;
        result.diagnostics.push_back({0, "cannot open config file '" + path + "'"});
        return result;
    }
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto slash = path.find_last_of('/');
    const std::string base_dir = slash == std::string::npos ? "." : path.substr(0, slash);
    return validate_config(buffer.str(), base_dir);
}

}  // namespace honeyroles
