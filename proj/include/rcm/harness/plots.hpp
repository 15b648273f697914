#pragma once

#include <string>
#include <vector>

#include "rcm/harness/records.hpp"

namespace rcm::harness {

/// Text of a standalone matplotlib script for threshold or decay records. The
/// script reads `csv_relative_path`, resolved against its own directory.
/// Throws std::invalid_argument for empty input, mixed experiments, or an
/// experiment without a plot.
std::string plot_script(const std::vector<ResultRecord>& records, const std::string& csv_relative_path);

/// Writes plot_<experiment>.py into out_dir next to a reference to csv_path
/// and returns the script path.
std::string emit_plot_script(const std::vector<ResultRecord>& records, const std::string& csv_path,
                             const std::string& out_dir);

}  // namespace rcm::harness
