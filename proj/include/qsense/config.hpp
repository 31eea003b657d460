// Experiment configuration: JSON document with Table-I defaults, strict keys.
#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qsense/protocol.hpp"

namespace qsense {

enum class ExperimentKind {
  table1,
  table2,
  fig1,
  fig2,
  fig3,
  fig4,
  fig5,
  sweep,
  validate,
};

const char* to_string(ExperimentKind kind);
std::optional<ExperimentKind> experiment_from_string(const std::string& name);

enum class EnginePath { fast, reference };

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::optional<ExperimentKind> experiment;
  std::vector<SpinValue> spins;  // empty => per-experiment default list
  ModelSpec model;               // Table-I defaults
  TimeGrid t_grid;
  AlphaGrid alpha_grid;
  BasisGrid basis_grid;
  double fd_step = 1e-9;
  std::optional<int> n_eff;  // absent => N - 1
  std::uint64_t seed = 1;
  int threads = 0;  // 0 = library default
  std::uint64_t n_samples = 10000;
  int n_bins = 50;
  double fig2_t_star = 50.76;
  // Optimal fall-off rates per spin for the NNN comparison (fig4); keys are
  // two_s.  Defaults to the published optimal pairs.
  std::map<int, double> fig4_alpha;
  bool fig4_optimize = false;
  bool write_json = false;  // JSON mirror next to each CSV
  EnginePath engine = EnginePath::fast;

  ProtocolConfig protocol_for(SpinValue s) const;
  void validate() const;
};

// Parses a JSON document; missing keys fall back to the defaults above,
// unknown keys raise ConfigError with a line reference.
ExperimentConfig parse_config(const std::string& json_text);

// Compact one-line JSON echo of a parsed configuration (for file metadata).
std::string config_echo(const ExperimentConfig& cfg);

}  // namespace qsense
