#ifndef LAMPERTI_RUNNER_HPP
#define LAMPERTI_RUNNER_HPP

#include <string>

#include "lamperti/config.hpp"

namespace lamperti {

inline constexpr const char* kVersion = "0.1.0";

// Executes one subcommand, writing CSV artifacts and a run manifest into
// cfg.out_dir. Returns the process exit code: 0 success, 2 runtime/numeric
// error, 3 acceptance check failed (check-* commands). Config errors throw
// ConfigError (mapped to exit 1 by the CLI).
int run_command(const std::string& command, const std::string& variant, RunConfig cfg);

unsigned resolve_threads(const RunConfig& cfg);

} // namespace lamperti

#endif
