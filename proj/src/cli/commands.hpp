#pragma once

#include <string>

#include "cli/config.hpp"
#include "cli/emit.hpp"

namespace efimov::cli {

// Runs one command against a parsed config and returns the payload; throws
// the shared error types (schema / numerical guard / dimension guard / io)
// for the driver to map onto exit codes. Checks config.command against the
// invoked command when present.
CommandResult run_command(const std::string& command, const ExperimentConfig& cfg);

// Per-command default output format: "csv" for the tabular sweeps, "json"
// for structured reports. Commands without a tabular form reject csv.
std::string default_format(const std::string& command);

}  // namespace efimov::cli
