#pragma once

#include <map>
#include <string>

#include "ufn/report.hpp"

namespace ufn {

// Experiment parameters as parsed key=value strings. Each experiment
// validates its own key set and echoes the resolved values into the report,
// so identical inputs serialize identically.
using ParamMap = std::map<std::string, std::string>;

// Experiment ids: icgn-gowers, icgn-correlation, general-n, digits,
// identities, dixon, rank-tail, distributions. Unknown ids and malformed or
// out-of-range parameters throw std::invalid_argument naming the violated
// guard.
// Aggregate rows (counts over instances of mixed sizes) carry N = 0.
ExperimentReport run_experiment(const std::string& name,
                                const ParamMap& params);

}  // namespace ufn
