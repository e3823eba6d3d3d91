#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace mgsg {

// Raw command-line values. Composite flags stay strings here and are parsed by run(),
// so that malformed values end up in the structured report.
struct CliOptions {
    std::string command;
    std::string input;
    std::optional<std::string> k;       // "re,im"
    std::optional<double> kappa;
    std::optional<std::string> x, y;    // "edge:pos"
    std::optional<double> t;
    std::optional<double> cutoff;
    std::optional<int> grid;
    std::uint64_t seed = 1;
    std::optional<std::string> range;   // "lo,hi"
    std::string format = "json";
    std::optional<std::string> from, to; // "edge" or "edge:-" / "edge:+"
    std::optional<std::string> psi0;     // "bump:edge:centre:width", "sine:edge", "const:value"
    std::string method = "spectral";     // evolve: spectral | fd
};

struct RunResult {
    int exit_code = 0;  // 0 ok, 1 a check failed, 2 error
    std::string output;
};

// Reads MGSG_TOL_OVERRIDE (a positive factor applied to the check tolerances).
RunResult run(const CliOptions& opts);

std::uint64_t fnv1a64(const std::string& bytes);

inline constexpr const char* report_schema = "mgsg.report/1";

} // namespace mgsg
