#pragma once

#include "opcalc/catalog.hpp"
#include "opcalc/parser.hpp"

#include <cstdint>
#include <string>

namespace opcalc {

struct CliOptions {
    std::uint64_t seed = 0;
    int samples = 20;
    double tol = 1e-8;
    bool verify = false;  // append oracle cross-checks to any subcommand
};

struct CliResult {
    int exit_code = 0;  // 0 pass, 1 fail-verdict, 2 error
    std::string output; // JSON report
};

// Subcommands: normalize, symbol, mainpart, commute, poisson, rank,
// check-integrable, check-correlation, check-dependence, check-nec,
// homogenize, verify.
CliResult run_subcommand(const std::string& subcommand, const SystemFile& sf,
                         const CliOptions& opt);

// Catalog bridge: every built-in system exports to the file format.
SystemFile to_system_file(const System& sys);

} // namespace opcalc
