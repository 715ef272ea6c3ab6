#include <smstab/report.hpp>

#include <cstdio>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace smstab {

namespace {

using nlohmann::ordered_json;

std::string g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

ordered_json complex_pairs(const std::vector<std::complex<double>>& zs) {
    ordered_json arr = ordered_json::array();
    for (const auto& z : zs) arr.push_back({z.real(), z.imag()});
    return arr;
}

ordered_json single_json(const single_machine& p, const single_report& rep,
                         const std::vector<single_stability>& st) {
    ordered_json j;
    j["model"] = "single";
    j["cubic"] = rep.cubic;
    j["discriminant"] = rep.discriminant;
    j["repeated_root"] = rep.repeated_root;
    j["equilibria"] = ordered_json::array();
    for (std::size_t k = 0; k < rep.equilibria.size(); ++k) {
        const auto& e = rep.equilibria[k];
        ordered_json je;
        je["omega"] = e.omega;
        je["i_d"] = e.i_d;
        je["i_q"] = e.i_q;
        je["residual"] = equilibrium_residual(p, e);
        if (k < st.size()) {
            const auto& s = st[k];
            je["routh"] = {{"a2", s.routh.a2},
                           {"a1", s.routh.a1},
                           {"a0", s.routh.a0},
                           {"positive_coefficients", s.routh.positive_coefficients},
                           {"pivot", s.routh.pivot},
                           {"stable", s.routh.stable}};
            je["lyapunov"] = {{"m1", s.lyapunov.m1},
                              {"m2", s.lyapunov.m2},
                              {"m3", s.lyapunov.m3},
                              {"semidefinite", s.lyapunov.semidefinite},
                              {"damping_threshold", s.lyapunov.damping_threshold},
                              {"holds", s.lyapunov.holds}};
            je["eigenvalues"] = complex_pairs(s.eigenvalues);
            je["verdict"] = to_string(s.eigen_verdict);
            je["routh_matches_eigen"] = s.routh_matches_eigen;
        }
        j["equilibria"].push_back(je);
    }
    j["rejected"] = complex_pairs(rep.rejected);
    return j;
}

ordered_json two_json(const two_machine& p, const two_report& rep,
                      const std::vector<two_stability>& st) {
    ordered_json j;
    j["model"] = "two";
    j["polynomial"] = rep.polynomial;
    j["equilibria"] = ordered_json::array();
    for (std::size_t k = 0; k < rep.equilibria.size(); ++k) {
        const auto& e = rep.equilibria[k];
        ordered_json je;
        je["delta"] = e.delta;
        je["omega"] = e.omega;
        je["currents"] = e.currents;
        je["residual"] = equilibrium_residual(p, e);
        if (k < st.size()) {
            je["eigenvalues"] = complex_pairs(st[k].eigenvalues);
            je["verdict"] = to_string(st[k].eigen_verdict);
        }
        j["equilibria"].push_back(je);
    }
    j["rejected"] = ordered_json::array();
    for (const auto& r : rep.rejected)
        j["rejected"].push_back(
            {{"root", {r.omega.real(), r.omega.imag()}}, {"reason", r.reason}});
    j["routes_agree"] = rep.routes_agree;
    j["disagreements"] = ordered_json::array();
    for (const auto& f : rep.disagreements) j["disagreements"].push_back(f.description);
    j["angle_continuum"] = rep.angle_continuum;
    return j;
}

template <class Writer>
std::string csv_table(const std::vector<std::string>& header, std::size_t rows, Writer&& row) {
    std::ostringstream out;
    for (std::size_t k = 0; k < header.size(); ++k) out << (k ? "," : "") << header[k];
    out << "\n";
    for (std::size_t k = 0; k < rows; ++k) {
        row(out, k);
        out << "\n";
    }
    return out.str();
}

std::string verdict_or_empty(std::size_t k, const std::vector<single_stability>& st) {
    return k < st.size() ? to_string(st[k].eigen_verdict) : std::string{};
}

}  // namespace

output_format parse_format(const std::string& name) {
    if (name == "json") return output_format::json;
    if (name == "csv") return output_format::csv;
    if (name == "text") return output_format::text;
    throw std::invalid_argument("unknown output format '" + name + "'");
}

std::string render_single(const single_machine& p, const single_report& rep,
                          const std::vector<single_stability>& st, output_format fmt) {
    if (fmt == output_format::json) return single_json(p, rep, st).dump(2) + "\n";
    if (fmt == output_format::csv)
        return csv_table({"omega", "i_d", "i_q", "residual", "verdict"}, rep.equilibria.size(),
                         [&](std::ostringstream& out, std::size_t k) {
                             const auto& e = rep.equilibria[k];
                             out << g17(e.omega) << "," << g17(e.i_d) << "," << g17(e.i_q) << ","
                                 << g17(equilibrium_residual(p, e)) << ","
                                 << verdict_or_empty(k, st);
                         });
    std::ostringstream out;
    out << "equilibrium speeds: " << rep.equilibria.size() << " (cubic discriminant "
        << g17(rep.discriminant) << (rep.repeated_root ? ", repeated root" : "") << ")\n";
    for (std::size_t k = 0; k < rep.equilibria.size(); ++k) {
        const auto& e = rep.equilibria[k];
        out << "  omega = " << g17(e.omega) << "  i_d = " << g17(e.i_d)
            << "  i_q = " << g17(e.i_q);
        if (k < st.size()) {
            const auto& s = st[k];
            out << "\n    verdict: " << to_string(s.eigen_verdict)
                << "  routh: " << (s.routh.stable ? "stable" : "not stable")
                << " (a2 = " << g17(s.routh.a2) << ", a1 = " << g17(s.routh.a1)
                << ", a0 = " << g17(s.routh.a0) << ")"
                << "\n    energy condition: " << (s.lyapunov.holds ? "holds" : "fails")
                << " (needs D >= " << g17(s.lyapunov.damping_threshold) << ")";
        }
        out << "\n";
    }
    for (const auto& r : rep.rejected)
        out << "  rejected root (" << g17(r.real()) << ", " << g17(r.imag()) << "i)\n";
    return out.str();
}

std::string render_two(const two_machine& p, const two_report& rep,
                       const std::vector<two_stability>& st, output_format fmt) {
    if (fmt == output_format::json) return two_json(p, rep, st).dump(2) + "\n";
    if (fmt == output_format::csv)
        return csv_table(
            {"delta", "omega", "i_d1", "i_q1", "i_d2", "i_q2", "i_d3", "i_q3", "residual",
             "verdict"},
            rep.equilibria.size(), [&](std::ostringstream& out, std::size_t k) {
                const auto& e = rep.equilibria[k];
                out << g17(e.delta) << "," << g17(e.omega);
                for (double c : e.currents) out << "," << g17(c);
                out << "," << g17(equilibrium_residual(p, e)) << ","
                    << (k < st.size() ? to_string(st[k].eigen_verdict) : std::string{});
            });
    std::ostringstream out;
    out << "equilibria: " << rep.equilibria.size();
    if (rep.angle_continuum) out << " (unexcited: every angle offset is an equilibrium)";
    out << "\n";
    for (std::size_t k = 0; k < rep.equilibria.size(); ++k) {
        const auto& e = rep.equilibria[k];
        out << "  omega = " << g17(e.omega) << "  delta = " << g17(e.delta);
        if (k < st.size()) out << "  verdict: " << to_string(st[k].eigen_verdict);
        out << "\n    currents:";
        for (double c : e.currents) out << " " << g17(c);
        out << "\n";
    }
    if (!rep.disagreements.empty()) {
        out << "route disagreements:\n";
        for (const auto& f : rep.disagreements) out << "  " << f.description << "\n";
    } else {
        out << "routes agree\n";
    }
    for (const auto& r : rep.rejected)
        out << "  rejected (" << g17(r.omega.real()) << ", " << g17(r.omega.imag())
            << "i): " << r.reason << "\n";
    return out.str();
}

std::string render_basin(const basin_scan_result& scan, output_format fmt) {
    if (fmt == output_format::json) {
        ordered_json j;
        j["attractors"] = scan.attractors;
        j["points"] = ordered_json::array();
        for (const auto& pt : scan.points)
            j["points"].push_back(
                {{"omega0", pt.omega0}, {"label", pt.label}, {"omega_end", pt.omega_end}});
        return j.dump(2) + "\n";
    }
    if (fmt == output_format::csv)
        return csv_table({"omega0", "label", "omega_end"}, scan.points.size(),
                         [&](std::ostringstream& out, std::size_t k) {
                             const auto& pt = scan.points[k];
                             out << g17(pt.omega0) << "," << pt.label << ","
                                 << g17(pt.omega_end);
                         });
    std::ostringstream out;
    out << "attractors:";
    for (double a : scan.attractors) out << " " << g17(a);
    out << "\n";
    for (const auto& pt : scan.points)
        out << "  omega0 = " << g17(pt.omega0) << " -> "
            << (pt.label >= 0 ? "attractor " + std::to_string(pt.label) : std::string("unresolved"))
            << " (omega_end = " << g17(pt.omega_end) << ")\n";
    return out.str();
}

std::string render_two_check(const expansion_check& chk, const two_report& rep,
                             output_format fmt) {
    const bool routes_ok = rep.routes_agree;
    if (fmt == output_format::json) {
        ordered_json j;
        j["routes_agree"] = routes_ok;
        j["disagreements"] = ordered_json::array();
        for (const auto& f : rep.disagreements) j["disagreements"].push_back(f.description);
        j["expansion"] = {{"leading_matches", chk.leading_matches},
                          {"odd_part_vanishes", chk.odd_part_vanishes},
                          {"shares_roots", chk.shares_roots},
                          {"max_root_distance", chk.max_root_distance},
                          {"coefficients", chk.coeffs}};
        return j.dump(2) + "\n";
    }
    std::ostringstream out;
    out << "solver routes: " << (routes_ok ? "agree" : "DISAGREE") << "\n";
    for (const auto& f : rep.disagreements) out << "  " << f.description << "\n";
    out << "tabulated expansion: leading " << (chk.leading_matches ? "matches" : "MISMATCH")
        << ", torque-symmetric reduction " << (chk.odd_part_vanishes ? "holds" : "FAILS")
        << ", roots " << (chk.shares_roots ? "shared" : "NOT shared") << " (worst distance "
        << g17(chk.max_root_distance) << ")\n";
    return out.str();
}

}  // namespace smstab
