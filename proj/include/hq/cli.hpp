#pragma once

#include <cstdint>
#include <optional>
#include <string>

namespace hq::cli {

struct CliFlags {
    std::optional<std::string> out_dir;   // overrides output.dir
    std::optional<std::uint64_t> seed;    // overrides the sampler seed
    bool quiet = false;
};

/// In-process entry point behind the binary: runs one subcommand against a
/// config file and returns the process exit status. 0 = success, 2 = solver
/// failure, 1 = config or usage error.
[[nodiscard]] int run(const std::string& subcommand, const std::string& config_path,
                      const CliFlags& flags);

}  // namespace hq::cli
