#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace sshstat::cli {

/// Fully resolved invocation. main() fills this from flags; run()
/// validates it, executes the subcommand, and writes the report.
struct RunConfig {
    std::string subcommand;

    std::string input;    // unit-level CSV (q, compare, stratify, detect, scatter)
    std::string samples;  // sandwich sample CSV: columns h,y
    std::string frame;    // sandwich frame CSV: columns h,population
    std::string overlaps; // sandwich overlap CSV: columns r,h,weight

    std::string id_column = "id";
    std::string y_column = "y";
    std::vector<std::string> categorical; // force-typed covariate columns
    std::vector<std::string> continuous;

    std::string stratum;                  // pre-made partition column (compare: P1)
    std::string stratum2;                 // compare: P2
    std::string x_column;                 // continuous covariate (stratify, scatter)
    std::vector<std::string> factors;     // detect screen columns
    std::vector<std::string> interaction; // detect: exactly two columns

    std::string mode = "central";          // q: central | noncentral
    std::string alternative = "two-sided"; // compare: two-sided | greater | less
    std::string method = "quantile";       // quantile | equal | optimal
    std::size_t l = 4;
    std::size_t l_min = 2;
    std::size_t l_max = 0; // > 0 switches stratify to the l scan
    double alpha = 0.01;
    bool increment_rule = false;
    double tolerance = 1e-6; // interaction band width
    bool fpc = false;
    bool with_qx = false;
    bool descriptive_only = false;

    std::string preset;   // simulate: null | noncentral | noncentral-printed |
                          //           sandwich-strong | sandwich-null
    std::size_t reps = 0; // 0 = preset default
    std::uint64_t seed = 1;

    std::string out;             // report path; empty = stdout
    std::string svg;             // scatter only: optional SVG path
    std::string format = "json"; // json | csv (tabular subcommands only)
};

/// Executes the subcommand and writes the report. Returns the process exit
/// code: 0 success, 2 validation error, 3 degenerate data, 1 internal
/// error. Failures emit one-line error JSON on stderr.
int run(const RunConfig& cfg);

} // namespace sshstat::cli
