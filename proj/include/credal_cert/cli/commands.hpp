#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "credal_cert/cli/certificate.hpp"

namespace credal_cert::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNumerical = 2;
inline constexpr int kExitSimulationFailed = 3;

struct CertifyRequest {
    std::string source_path;
    std::string losses_path;
    std::string target_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;  // overrides the config seed
    bool clamp_risk = false;
};

Certificate certify(const CertifyRequest& request);

struct MonitorRequest {
    std::string source_path;
    std::string losses_path;
    std::string config_path;
    std::optional<std::uint64_t> seed;
    bool clamp_risk = false;
    std::size_t window = 1;  // batches pooled into each target sample
};

// Reads "---"-delimited batches from `stream` and writes one JSON line per
// batch. Malformed batches produce an error record and the stream continues.
// Returns the number of error records.
std::size_t monitor(const MonitorRequest& request, std::istream& stream, std::ostream& out);

// Command-line entry point. args excludes the program name.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err);

}  // namespace credal_cert::cli
