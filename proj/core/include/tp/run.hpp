#pragma once

#include "tp/config.hpp"

namespace tp {

struct CommandResult {
    int exit_code = 0;
    RunManifest manifest;
};

// Executes the command named in the spec, writing CSVs / snapshots / the
// manifest into spec.out_dir.
CommandResult run_command(const ExperimentSpec& spec);

} // namespace tp
