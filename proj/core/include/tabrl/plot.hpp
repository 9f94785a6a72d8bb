#pragma once

#include <string>
#include <vector>

#include "tabrl/experiment.hpp"

namespace tabrl {

/// Gnuplot script plotting normalized rate vs step: thick mean curves from
/// summary.csv plus thin per-run curves from thin.csv, both expected next to
/// the script. Valid (if empty) even when the summary has no rows.
std::string emit_plot_script(const std::vector<SummaryRow>& summary,
                             const std::string& title);

}  // namespace tabrl
