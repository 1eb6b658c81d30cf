#pragma once

#include "gprtfa/band.hpp"
#include "gprtfa/preprocess.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gprtfa::cli {

enum ExitCode : int { kOk = 0, kUsage = 2, kDegenerate = 3 };

// `args` excludes the program name. Diagnostics go to `err`, progress to `out`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int main(int argc, char** argv);

// "none", "all", or a comma list of zero-offset, time-zero, svd.
PipelineParams apply_skip_steps(PipelineParams params, std::string_view spec);
// "f_lo:f_hi" in Hz.
FrequencyBand parse_band(std::string_view text);

} // namespace gprtfa::cli
