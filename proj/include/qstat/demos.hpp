#pragma once

#include <string>
#include <vector>

#include "qstat/scenario.hpp"

namespace qstat {

// Built-in, self-checking scenarios. Each writes its CSV outputs under
// <out_dir>/<demo name>/ and reports one entry per embedded expectation.
RunReport run_demo(const std::string& name, const RunOptions& opts = {});

std::vector<std::string> demo_names();

}  // namespace qstat
