// Experiment drivers: run a configured experiment and emit CSV/JSON files.
#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "qsense/config.hpp"

namespace qsense {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

// The cross-module numerical-invariant suite behind the `validate`
// experiment (propagator unitarity and group law, protocol reversal,
// derivative cross-check, su(2) algebra, thermal closed form, partial-trace
// purity).
std::vector<CheckResult> validate_suite();

// Runs cfg.experiment, writing artifact files into out_dir.  Returns the
// process exit status (0 on success; validate returns nonzero when any
// check fails).
int run_experiment(const ExperimentConfig& cfg, const std::filesystem::path& out_dir);

}  // namespace qsense
