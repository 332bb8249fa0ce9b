#pragma once

#include <optional>
#include <string>

#include "surropt/engine.hpp"

namespace surropt {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SpaceDimOverride {
  std::string name;
  std::int64_t lower = 0;
  std::int64_t upper = 0;
  DimCodec codec;
};

struct ExternalObjectiveConfig {
  std::string command;  // receives the point as name=value arguments
  double timeout_seconds = 60.0;
};

struct CompareConfig {
  double threshold = 1.0;  // best-so-far loss level the ratio is measured at
  int seeds = 20;
};

struct RunConfig {
  std::string benchmark;  // empty when an external objective is configured
  std::optional<ExternalObjectiveConfig> external;
  std::vector<SpaceDimOverride> space_dims;  // defines or overrides the space
  EngineConfig engine;
  CompareConfig compare;
  std::uint64_t data_seed = 1;
  std::string output_dir = "out";
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text, const std::string& origin);
std::string serialize_config(const RunConfig& cfg);

// Resolves the benchmark (if any) and applies space overrides.
struct ResolvedProblem {
  std::optional<Benchmark> benchmark;  // engine objective references this; keep alive
  HyperparameterSpace space;
};

ResolvedProblem resolve_problem(const RunConfig& cfg);

}  // namespace surropt
