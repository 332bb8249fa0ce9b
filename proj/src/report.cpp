#include "surropt/report.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <sstream>

namespace surropt {

LogReadResult read_log(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open log '" + path + "'");
  LogReadResult result;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      result.records.push_back(record_from_json(line));
    } catch (const std::exception& e) {
      result.errors.push_back("line " + std::to_string(line_no) + ": " + e.what());
      break;  // partial logs are processed up to the break
    }
  }
  return result;
}

std::string convergence_table(const std::vector<EvaluationRecord>& records) {
  std::vector<const EvaluationRecord*> ordered;
  ordered.reserve(records.size());
  for (const auto& rec : records) ordered.push_back(&rec);
  std::sort(ordered.begin(), ordered.end(), [](const auto* a, const auto* b) {
    return a->completion_index < b->completion_index;
  });

  std::ostringstream out;
  out.precision(17);
  out << "completion_index,loss,ci_lower,ci_upper,best_so_far\n";
  double best = std::numeric_limits<double>::infinity();
  for (const auto* rec : ordered) {
    if (!rec->failed) best = std::min(best, rec->loss);
    out << rec->completion_index << "," << rec->loss << "," << rec->interval.lower() << ","
        << rec->interval.upper() << "," << best << "\n";
  }
  return out.str();
}

std::string scatter_table(const std::vector<EvaluationRecord>& records) {
  std::ostringstream out;
  out.precision(17);
  out << "loss,loss_std,param_count\n";
  for (const auto& rec : records) {
    if (rec.failed) continue;
    out << rec.loss << "," << rec.loss_std << ",";
    if (rec.param_count) out << *rec.param_count;
    out << "\n";
  }
  return out.str();
}

std::vector<std::size_t> pareto_set(const std::vector<EvaluationRecord>& records) {
  auto dominates = [](const EvaluationRecord& a, const EvaluationRecord& b) {
    return a.loss <= b.loss && a.loss_std <= b.loss_std &&
           (a.loss < b.loss || a.loss_std < b.loss_std);
  };
  std::vector<std::size_t> front;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].failed) continue;
    bool dominated = false;
    for (std::size_t j = 0; j < records.size() && !dominated; ++j) {
      if (j == i || records[j].failed) continue;
      if (dominates(records[j], records[i])) dominated = true;
    }
    if (!dominated) front.push_back(i);
  }
  return front;
}

std::string summary_text(const std::vector<EvaluationRecord>& records) {
  std::ostringstream out;
  out.precision(10);
  const EvaluationRecord* incumbent = nullptr;
  for (const auto& rec : records) {
    if (rec.failed) continue;
    if (!incumbent || rec.surrogate_value() < incumbent->surrogate_value()) incumbent = &rec;
  }
  out << "evaluations: " << records.size() << "\n";
  if (!incumbent) {
    out << "incumbent: none (all evaluations failed)\n";
    return out.str();
  }
  out << "incumbent: loss=" << incumbent->loss << " ci=[" << incumbent->interval.lower() << ", "
      << incumbent->interval.upper() << "] point=(";
  for (std::size_t i = 0; i < incumbent->point.values.size(); ++i) {
    out << (i ? "," : "") << incumbent->point.values[i];
  }
  out << ")\n";

  const auto front = pareto_set(records);
  out << "pareto set (low loss, low uncertainty), " << front.size() << " member(s):\n";
  for (const std::size_t i : front) {
    const auto& rec = records[i];
    out << "  eval " << rec.eval_id << ": loss=" << rec.loss << " std=" << rec.loss_std;
    if (rec.param_count) out << " params=" << *rec.param_count;
    out << "\n";
  }
  return out.str();
}

}  // namespace surropt
