#pragma once

// Run configuration: plain key = value files with optional [section] headers,
// overridden by command-line flags. Defaults mirror the physics choices used
// throughout (open level 7, closed weight 14, delta0 = S11^{3/2}, series
// order 30, N = 512 trace points).

#include "cftlat/prec.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cftlat {

struct RunConfig {
    int p = 3, q = 4;
    std::string symmetry = "all"; // all | first-row | z2 | "r1,s1;r2,s2;..."
    std::string delta0 = "s11^{3/2}";
    int open_level = 7;
    int closed_weight = 14;
    std::string h_max = "h(1,2)";
    std::vector<double> ratio_grid; // R/d values
    unsigned precision_digits = kPrecisionDigits;
    double quad_tol = 1e-7;
    int series_order = 30;
    int trace_points = 512;
    int threads = 0; // 0: hardware concurrency
    std::string cache_dir;
    std::string out_dir = ".";

    // throws std::invalid_argument with a field name on bad values
    void validate() const;
};

// parse key = value lines; unknown keys are an error (typo safety)
RunConfig load_config_file(const std::string& path);

// "a:b:n" (inclusive linspace) or comma list
std::vector<double> parse_grid(const std::string& text);

// exit codes used by the command line tool
enum ExitCode : int {
    kOk = 0,
    kConfigError = 2,
    kToleranceFailure = 3,
    kSizeOverflow = 4,
};

} // namespace cftlat
