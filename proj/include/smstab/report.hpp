#pragma once

#include <string>
#include <vector>

#include <smstab/sim.hpp>
#include <smstab/single_machine.hpp>
#include <smstab/two_machine.hpp>

namespace smstab {

enum class output_format { json, csv, text };

output_format parse_format(const std::string& name);

// stabilities pair index-wise with report.equilibria; pass {} to omit the analysis
std::string render_single(const single_machine& p, const single_report& rep,
                          const std::vector<single_stability>& stabilities, output_format fmt);
std::string render_two(const two_machine& p, const two_report& rep,
                       const std::vector<two_stability>& stabilities, output_format fmt);
std::string render_basin(const basin_scan_result& scan, output_format fmt);
std::string render_two_check(const expansion_check& chk, const two_report& rep,
                             output_format fmt);

}  // namespace smstab
