#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <smstab/config.hpp>
#include <smstab/error.hpp>
#include <smstab/report.hpp>
#include <smstab/sim.hpp>
#include <smstab/single_machine.hpp>
#include <smstab/two_machine.hpp>

namespace {

using smstab::output_format;

void emit(const std::string& text, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open '" + out_path + "' for writing");
    f << text;
}

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string trajectory_report(const smstab::num::trajectory& tr,
                              const std::vector<std::string>& columns, output_format fmt) {
    if (fmt == output_format::json) {
        nlohmann::ordered_json j;
        j["columns"] = columns;
        j["t"] = tr.t;
        j["x"] = tr.x;
        j["steady_state"] = tr.steady_state;
        j["end_time"] = tr.end_time;
        return j.dump(2) + "\n";
    }
    if (fmt == output_format::csv) {
        std::ostringstream out;
        out << "t";
        for (const auto& c : columns) out << "," << c;
        out << "\n";
        for (std::size_t k = 0; k < tr.t.size(); ++k) {
            out << g17(tr.t[k]);
            for (double v : tr.x[k]) out << "," << g17(v);
            out << "\n";
        }
        return out.str();
    }
    std::ostringstream out;
    out << "integrated to t = " << g17(tr.end_time)
        << (tr.steady_state ? " (steady state reached)" : "") << "\n"
        << "accepted steps: " << tr.stats.steps << ", rejected: " << tr.stats.rejected << "\n"
        << "final state:\n";
    const auto& x = tr.final_state();
    for (std::size_t k = 0; k < columns.size(); ++k)
        out << "  " << columns[k] << " = " << g17(x[k]) << "\n";
    return out.str();
}

const std::vector<std::string>& columns_for(smstab::config::model_kind model, bool abc) {
    static const std::vector<std::string> s_dq{"theta", "omega", "i_d", "i_q"};
    static const std::vector<std::string> s_abc{"theta", "omega", "i_a", "i_b", "i_c"};
    static const std::vector<std::string> t_dq{"delta", "omega1", "omega2", "i_d1", "i_q1",
                                              "i_d2", "i_q2",   "i_d3",   "i_q3"};
    static const std::vector<std::string> t_abc{"theta1", "omega1", "theta2", "omega2", "i1_a",
                                               "i1_b",   "i1_c",   "i2_a",   "i2_b",   "i2_c",
                                               "i3_a",   "i3_b",   "i3_c"};
    if (model == smstab::config::model_kind::single) return abc ? s_abc : s_dq;
    return abc ? t_abc : t_dq;
}

struct options {
    std::string config_path;
    std::string format = "text";
    std::string out_path;
    std::uint64_t seed = 0;
    double tol = -1.0;  // negative: use the config value
    double omega0 = std::numeric_limits<double>::quiet_NaN();
    double t_end = -1.0;
    int stride = 1;
    std::string frame = "dq";
    std::string grid;
};

int run_equilibria(const smstab::config& cfg, const options& opt, bool with_stability) {
    const auto fmt = smstab::parse_format(opt.format);
    if (cfg.model == smstab::config::model_kind::single) {
        const auto& p = cfg.single_params;
        const auto rep = smstab::find_equilibria(p);
        std::vector<smstab::single_stability> st;
        if (with_stability) {
            const double eps = opt.tol >= 0.0 ? opt.tol : cfg.verdict_eps;
            for (const auto& e : rep.equilibria)
                st.push_back(smstab::classify(p, e, cfg.linearization, eps));
        }
        emit(smstab::render_single(p, rep, st, fmt), opt.out_path);
        return 0;
    }
    const auto& p = cfg.two_params;
    const double rtol = opt.tol >= 0.0 && !with_stability ? opt.tol : cfg.residual_tol;
    const auto rep = smstab::find_equilibria(p, cfg.route, opt.seed, rtol);
    std::vector<smstab::two_stability> st;
    if (with_stability) {
        const double eps = opt.tol >= 0.0 ? opt.tol : cfg.verdict_eps;
        for (const auto& e : rep.equilibria) st.push_back(smstab::classify(p, e, eps));
    }
    emit(smstab::render_two(p, rep, st, fmt), opt.out_path);
    return 0;
}

int run_simulate(const smstab::config& cfg, const options& opt) {
    const auto fmt = smstab::parse_format(opt.format);
    const bool abc = opt.frame == "abc";
    if (!abc && opt.frame != "dq")
        throw std::invalid_argument("--frame must be 'dq' or 'abc'");

    smstab::sim_options so;
    so.t_end = opt.t_end > 0.0 ? opt.t_end : cfg.t_end;
    so.rel_tol = opt.tol >= 0.0 ? opt.tol : cfg.rel_tol;
    so.abs_tol = cfg.abs_tol;
    so.sample_stride = opt.stride;

    smstab::num::trajectory tr;
    if (cfg.model == smstab::config::model_kind::single) {
        std::vector<double> x0 = cfg.initial_state.empty() ? std::vector<double>(4, 0.0)
                                                           : cfg.initial_state;
        if (!std::isnan(opt.omega0)) x0[1] = opt.omega0;
        tr = abc ? smstab::simulate_single_abc(cfg.single_params,
                                               smstab::single_dq_to_abc_state(x0), so)
                 : smstab::simulate_single_dq(cfg.single_params, x0, so);
    } else {
        std::vector<double> x0 = cfg.initial_state.empty() ? std::vector<double>(9, 0.0)
                                                           : cfg.initial_state;
        if (!std::isnan(opt.omega0)) x0[1] = x0[2] = opt.omega0;
        tr = abc ? smstab::simulate_two_abc(cfg.two_params, smstab::two_dq_to_abc_state(x0), so)
                 : smstab::simulate_two_dq(cfg.two_params, x0, so);
    }
    emit(trajectory_report(tr, columns_for(cfg.model, abc), fmt), opt.out_path);
    return 0;
}

int run_basin(const smstab::config& cfg, const options& opt) {
    const auto fmt = smstab::parse_format(opt.format);
    if (cfg.model != smstab::config::model_kind::single)
        throw std::invalid_argument("basin scans are only defined for the single-machine model");
    double lo = 0.0, hi = 0.0;
    int count = 0;
    if (std::sscanf(opt.grid.c_str(), "%lf:%lf:%d", &lo, &hi, &count) != 3 || count < 1)
        throw std::invalid_argument("--grid must look like lo:hi:count");
    smstab::sim_options so;
    so.t_end = opt.t_end > 0.0 ? opt.t_end : cfg.t_end;
    so.rel_tol = cfg.rel_tol;
    so.abs_tol = cfg.abs_tol;
    const double match = opt.tol >= 0.0 ? opt.tol : 1.0e-4;
    emit(smstab::render_basin(smstab::basin_scan(cfg.single_params, lo, hi, count, so, match),
                              fmt),
         opt.out_path);
    return 0;
}

int run_check(const smstab::config& cfg, const options& opt) {
    const auto fmt = smstab::parse_format(opt.format);
    const double rtol = opt.tol >= 0.0 ? opt.tol : cfg.residual_tol;
    if (cfg.model == smstab::config::model_kind::single) {
        const auto& p = cfg.single_params;
        const auto rep = smstab::find_equilibria(p);
        std::vector<smstab::single_stability> st;
        bool ok = true;
        for (const auto& e : rep.equilibria) {
            st.push_back(smstab::classify(p, e, cfg.linearization, cfg.verdict_eps));
            ok = ok && smstab::equilibrium_residual(p, e) <= rtol &&
                 st.back().routh_matches_eigen;
        }
        emit(smstab::render_single(p, rep, st, fmt), opt.out_path);
        return ok ? 0 : 3;
    }
    const auto& p = cfg.two_params;
    const auto rep = smstab::find_equilibria(p, smstab::solve_route::both, opt.seed, rtol);
    const auto chk = smstab::check_expansion(p);
    emit(smstab::render_two_check(chk, rep, fmt), opt.out_path);
    return rep.routes_agree ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"equilibrium and stability analysis of synchronous machine circuits"};
    app.require_subcommand(1);

    options opt;
    auto add_common = [&opt](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "JSON parameter file")->required();
        sub->add_option("--format", opt.format, "json, csv, or text (default text)");
        sub->add_option("--out", opt.out_path, "write output to this file instead of stdout");
        sub->add_option("--seed", opt.seed, "seed for the multistart solver route");
        sub->add_option("--tol", opt.tol, "subcommand tolerance override");
    };

    auto* eq = app.add_subcommand("equilibria", "compute all equilibrium points");
    add_common(eq);
    auto* st = app.add_subcommand("stability", "equilibria plus stability classification");
    add_common(st);
    auto* sim = app.add_subcommand("simulate", "integrate the dynamics");
    add_common(sim);
    sim->add_option("--omega0", opt.omega0, "override the initial rotor speed(s)");
    sim->add_option("--t-end", opt.t_end, "integration horizon");
    sim->add_option("--stride", opt.stride, "keep every n-th sample");
    sim->add_option("--frame", opt.frame, "integrate in the 'dq' (default) or 'abc' frame");
    auto* ba = app.add_subcommand("basin", "map initial speeds to their steady outcomes");
    add_common(ba);
    ba->add_option("--grid", opt.grid, "initial speed range as lo:hi:count")->required();
    ba->add_option("--t-end", opt.t_end, "integration horizon per point");
    auto* ck = app.add_subcommand("check", "internal consistency checks");
    add_common(ck);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        const auto cfg = smstab::load_config(opt.config_path);
        if (eq->parsed()) return run_equilibria(cfg, opt, false);
        if (st->parsed()) return run_equilibria(cfg, opt, true);
        if (sim->parsed()) return run_simulate(cfg, opt);
        if (ba->parsed()) return run_basin(cfg, opt);
        return run_check(cfg, opt);
    } catch (const smstab::consistency_error& e) {
        std::cerr << "inconsistency: " << e.what() << "\n";
        return 3;
    } catch (const smstab::numeric_error& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
