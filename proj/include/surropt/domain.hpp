#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace surropt {

using Rng = std::mt19937_64;

// Maps an integer lattice index to a real hyperparameter value
// (value = offset + step * index). Identity by default.
struct DimCodec {
  double offset = 0.0;
  double step = 1.0;
  double decode(std::int64_t index) const { return offset + step * static_cast<double>(index); }
};

struct HyperparameterSpace {
  std::vector<std::string> names;
  std::vector<std::int64_t> lower;
  std::vector<std::int64_t> upper;
  std::vector<DimCodec> codecs;  // same length as names

  std::size_t dims() const { return names.size(); }

  // Throws std::invalid_argument on inconsistent lengths or lower > upper.
  void validate() const;

  // Number of lattice points, or nullopt if it overflows int64.
  std::optional<std::int64_t> lattice_size() const;
};

struct HyperparameterSet {
  std::vector<std::int64_t> values;

  bool operator==(const HyperparameterSet&) const = default;
};

struct PointHash {
  std::size_t operator()(const HyperparameterSet& p) const;
};

struct ConfidenceInterval {
  double center = 0.0;
  double radius = 0.0;

  double lower() const { return center - radius; }
  double upper() const { return center + radius; }
};

// Sentinel loss recorded for divergent / failed evaluations.
inline constexpr double kFailedLossSentinel = 1e12;

struct EvaluationRecord {
  HyperparameterSet point;
  double loss = 0.0;      // outer loss estimate (CI center)
  double loss_std = 0.0;  // variability across trained models and dropout masks
  ConfidenceInterval interval;
  std::optional<double> regulated_loss;
  std::optional<std::int64_t> param_count;  // unknown for external objectives
  double wall_time = 0.0;
  int trial_count = 1;
  int dropout_passes = 0;
  bool failed = false;
  std::int64_t eval_id = 0;           // dispatch order, 1-based
  std::int64_t completion_index = 0;  // completion order, 1-based
  std::vector<std::int64_t> proposal_basis;  // eval ids seen by the proposing surrogate

  // The value the surrogate is trained on.
  double surrogate_value() const { return regulated_loss ? *regulated_loss : loss; }
};

bool validate_point(const HyperparameterSpace& space, const HyperparameterSet& point);

HyperparameterSet random_point(const HyperparameterSpace& space, Rng& rng);

double distance(const HyperparameterSet& a, const HyperparameterSet& b);

std::string record_to_json(const EvaluationRecord& rec);
EvaluationRecord record_from_json(const std::string& line);

}  // namespace surropt
