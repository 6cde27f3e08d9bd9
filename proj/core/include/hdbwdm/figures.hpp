#pragma once

#include "hdbwdm/harness.hpp"

#include <span>
#include <string>

namespace hdbwdm {

/// Grouped bar chart of ABDM and AWDM per partition.
std::string diagnostic_svg(const DiagnosticReport& rep);

/// Mean HD-BWDM against p, one line per method, with +-1 SD error bars.
std::string sweep_svg(std::span<const SweepCell> cells);

}  // namespace hdbwdm
