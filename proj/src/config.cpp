#include <smstab/config.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace smstab {

namespace {

using nlohmann::json;

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key)) throw std::invalid_argument("config: missing required key '" + key + "'");
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument("config: key '" + key + "' must be a number");
    return v.get<double>();
}

double optional_number(const json& j, const std::string& key, double fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_number()) throw std::invalid_argument("config: key '" + key + "' must be a number");
    return v.get<double>();
}

std::string optional_string(const json& j, const std::string& key, const std::string& fallback) {
    if (!j.contains(key)) return fallback;
    const auto& v = j.at(key);
    if (!v.is_string()) throw std::invalid_argument("config: key '" + key + "' must be a string");
    return v.get<std::string>();
}

void reject_unknown_keys(const json& j, const std::set<std::string>& allowed) {
    for (const auto& item : j.items())
        if (!allowed.contains(item.key()))
            throw std::invalid_argument("config: unknown key '" + item.key() + "'");
}

double excitation_constant(const json& j) {
    const bool has_b = j.contains("b");
    const bool has_mf = j.contains("M_f") || j.contains("i_f");
    if (has_b && has_mf)
        throw std::invalid_argument("config: give either 'b' or the pair 'M_f'/'i_f', not both");
    if (has_b) return require_number(j, "b");
    if (has_mf) return std::sqrt(1.5) * require_number(j, "M_f") * require_number(j, "i_f");
    throw std::invalid_argument("config: missing excitation ('b' or 'M_f' with 'i_f')");
}

void read_common_options(const json& j, config& c) {
    c.t_end = optional_number(j, "t_end", c.t_end);
    c.rel_tol = optional_number(j, "rel_tol", c.rel_tol);
    c.abs_tol = optional_number(j, "abs_tol", c.abs_tol);
    c.verdict_eps = optional_number(j, "verdict_eps", c.verdict_eps);
    c.residual_tol = optional_number(j, "residual_tol", c.residual_tol);
    if (j.contains("initial_state")) {
        const auto& v = j.at("initial_state");
        if (!v.is_array()) throw std::invalid_argument("config: 'initial_state' must be an array");
        for (const auto& entry : v) {
            if (!entry.is_number())
                throw std::invalid_argument("config: 'initial_state' entries must be numbers");
            c.initial_state.push_back(entry.get<double>());
        }
    }
}

config parse_single(const json& j) {
    reject_unknown_keys(j, {"model", "J", "D", "T_m", "R", "L", "R_s", "R_l", "L_s", "L_l", "b",
                            "M_f", "i_f", "linearization", "t_end", "rel_tol", "abs_tol",
                            "verdict_eps", "residual_tol", "initial_state"});
    config c;
    c.model = config::model_kind::single;
    auto& p = c.single_params;
    p.J = require_number(j, "J");
    p.D = require_number(j, "D");
    p.T_m = require_number(j, "T_m");

    const bool aggregate = j.contains("R") || j.contains("L");
    const bool split = j.contains("R_s") || j.contains("R_l") || j.contains("L_s") || j.contains("L_l");
    if (aggregate && split)
        throw std::invalid_argument(
            "config: give either series totals 'R'/'L' or the parts 'R_s'/'R_l'/'L_s'/'L_l'");
    if (aggregate) {
        p.R = require_number(j, "R");
        p.L = require_number(j, "L");
    } else if (split) {
        p.R = require_number(j, "R_s") + require_number(j, "R_l");
        p.L = require_number(j, "L_s") + require_number(j, "L_l");
    } else {
        throw std::invalid_argument("config: missing impedance keys");
    }
    p.b = excitation_constant(j);

    const auto form = optional_string(j, "linearization", "consistent");
    if (form == "consistent")
        c.linearization = linearization_form::consistent;
    else if (form == "alternate")
        c.linearization = linearization_form::alternate;
    else
        throw std::invalid_argument("config: 'linearization' must be 'consistent' or 'alternate'");

    read_common_options(j, c);
    p.validate();
    if (!c.initial_state.empty() && c.initial_state.size() != 4)
        throw std::invalid_argument("config: single-machine 'initial_state' needs 4 components");
    return c;
}

config parse_two(const json& j) {
    reject_unknown_keys(j, {"model", "J", "D", "T_m1", "T_m2", "R", "R_s", "R_L", "L", "L3", "b",
                            "M_f", "i_f", "route", "t_end", "rel_tol", "abs_tol", "verdict_eps",
                            "residual_tol", "initial_state"});
    config c;
    c.model = config::model_kind::two;
    auto& p = c.two_params;
    p.J = require_number(j, "J");
    p.D = require_number(j, "D");
    p.T_m1 = require_number(j, "T_m1");
    p.T_m2 = require_number(j, "T_m2");
    p.R_L = require_number(j, "R_L");
    p.L = require_number(j, "L");
    p.L3 = require_number(j, "L3");

    if (j.contains("R") && j.contains("R_s"))
        throw std::invalid_argument("config: give either the series total 'R' or the stator 'R_s'");
    if (j.contains("R"))
        p.R = require_number(j, "R");
    else if (j.contains("R_s"))
        p.R = require_number(j, "R_s") + p.R_L;
    else
        throw std::invalid_argument("config: missing 'R' or 'R_s'");
    p.b = excitation_constant(j);

    const auto route = optional_string(j, "route", "both");
    if (route == "resultant")
        c.route = solve_route::resultant;
    else if (route == "newton")
        c.route = solve_route::newton;
    else if (route == "both")
        c.route = solve_route::both;
    else
        throw std::invalid_argument("config: 'route' must be 'resultant', 'newton', or 'both'");

    read_common_options(j, c);
    p.validate();
    if (!c.initial_state.empty() && c.initial_state.size() != 9)
        throw std::invalid_argument("config: two-machine 'initial_state' needs 9 components");
    return c;
}

}  // namespace

config parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: invalid JSON: ") + e.what());
    }
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    const auto model = optional_string(j, "model", "");
    if (model == "single") return parse_single(j);
    if (model == "two") return parse_two(j);
    throw std::invalid_argument("config: 'model' must be 'single' or 'two'");
}

config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace smstab
