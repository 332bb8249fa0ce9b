#include "surropt/domain.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"
#include "surropt/kernels.hpp"

namespace surropt {

void HyperparameterSpace::validate() const {
  if (names.empty()) throw std::invalid_argument("search space must have at least one dimension");
  if (lower.size() != names.size() || upper.size() != names.size() ||
      codecs.size() != names.size()) {
    throw std::invalid_argument("search space field lengths disagree");
  }
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (lower[i] > upper[i]) {
      throw std::invalid_argument("dimension '" + names[i] + "': lower bound exceeds upper bound");
    }
  }
}

std::optional<std::int64_t> HyperparameterSpace::lattice_size() const {
  std::int64_t total = 1;
  for (std::size_t i = 0; i < names.size(); ++i) {
    const std::int64_t extent = upper[i] - lower[i] + 1;
    if (total > std::numeric_limits<std::int64_t>::max() / extent) return std::nullopt;
    total *= extent;
  }
  return total;
}

std::size_t PointHash::operator()(const HyperparameterSet& p) const {
  std::size_t h = 1469598103934665603ull;
  for (const std::int64_t v : p.values) {
    h ^= static_cast<std::size_t>(v);
    h *= 1099511628211ull;
  }
  return h;
}

bool validate_point(const HyperparameterSpace& space, const HyperparameterSet& point) {
  if (point.values.size() != space.dims()) {
    throw std::invalid_argument("point dimensionality does not match the search space");
  }
  for (std::size_t i = 0; i < space.dims(); ++i) {
    if (point.values[i] < space.lower[i] || point.values[i] > space.upper[i]) return false;
  }
  return true;
}

HyperparameterSet random_point(const HyperparameterSpace& space, Rng& rng) {
  HyperparameterSet p;
  p.values.reserve(space.dims());
  for (std::size_t i = 0; i < space.dims(); ++i) {
    std::uniform_int_distribution<std::int64_t> dist(space.lower[i], space.upper[i]);
    p.values.push_back(dist(rng));
  }
  return p;
}

double distance(const HyperparameterSet& a, const HyperparameterSet& b) {
  if (a.values.size() != b.values.size()) {
    throw std::invalid_argument("distance: point dimensions disagree");
  }
  const std::size_t n = a.values.size();
  std::vector<double> da(n), db(n);
  for (std::size_t i = 0; i < n; ++i) {
    da[i] = static_cast<double>(a.values[i]);
    db[i] = static_cast<double>(b.values[i]);
  }
  return std::sqrt(kernels::squared_distance(da.data(), db.data(), n));
}

std::string record_to_json(const EvaluationRecord& rec) {
  nlohmann::json j;
  j["point"] = rec.point.values;
  j["loss"] = rec.loss;
  j["loss_std"] = rec.loss_std;
  j["ci_lower"] = rec.interval.lower();
  j["ci_upper"] = rec.interval.upper();
  j["ci_radius"] = rec.interval.radius;
  if (rec.regulated_loss) j["regulated_loss"] = *rec.regulated_loss;
  if (rec.param_count) j["param_count"] = *rec.param_count;
  j["wall_time"] = rec.wall_time;
  j["trial_count"] = rec.trial_count;
  j["dropout_passes"] = rec.dropout_passes;
  j["failed"] = rec.failed;
  j["eval_id"] = rec.eval_id;
  j["completion_index"] = rec.completion_index;
  j["proposal_basis"] = rec.proposal_basis;
  return j.dump();
}

EvaluationRecord record_from_json(const std::string& line) {
  const nlohmann::json j = nlohmann::json::parse(line);
  EvaluationRecord rec;
  rec.point.values = j.at("point").get<std::vector<std::int64_t>>();
  rec.loss = j.at("loss").get<double>();
  rec.loss_std = j.at("loss_std").get<double>();
  rec.interval.center = rec.loss;
  rec.interval.radius = j.contains("ci_radius")
                            ? j["ci_radius"].get<double>()
                            : (j.at("ci_upper").get<double>() - j.at("ci_lower").get<double>()) / 2.0;
  if (j.contains("regulated_loss")) rec.regulated_loss = j["regulated_loss"].get<double>();
  if (j.contains("param_count")) rec.param_count = j["param_count"].get<std::int64_t>();
  rec.wall_time = j.at("wall_time").get<double>();
  rec.trial_count = j.at("trial_count").get<int>();
  rec.dropout_passes = j.at("dropout_passes").get<int>();
  rec.failed = j.value("failed", false);
  rec.eval_id = j.at("eval_id").get<std::int64_t>();
  rec.completion_index = j.at("completion_index").get<std::int64_t>();
  rec.proposal_basis = j.at("proposal_basis").get<std::vector<std::int64_t>>();
  return rec;
}

}  // namespace surropt
