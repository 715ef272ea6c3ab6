#pragma once

#include <string>
#include <vector>

#include <smstab/single_machine.hpp>
#include <smstab/two_machine.hpp>

namespace smstab {

// run configuration parsed from a JSON file; see README.md for the schema
struct config {
    enum class model_kind { single, two };

    model_kind model = model_kind::single;
    single_machine single_params;
    two_machine two_params;

    linearization_form linearization = linearization_form::consistent;
    solve_route route = solve_route::both;
    double t_end = 200.0;
    double rel_tol = 1.0e-8;
    double abs_tol = 1.0e-10;
    double verdict_eps = 1.0e-7;
    double residual_tol = 1.0e-8;
    std::vector<double> initial_state;  // empty: all-zero state of the right width
};

config parse_config(const std::string& json_text);
config load_config(const std::string& path);

}  // namespace smstab
