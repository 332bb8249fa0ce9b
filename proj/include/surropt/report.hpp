#pragma once

#include <string>
#include <vector>

#include "surropt/domain.hpp"

namespace surropt {

struct LogReadResult {
  std::vector<EvaluationRecord> records;  // parsed up to the first bad line
  std::vector<std::string> errors;        // "line N: ..." for malformed lines
};

LogReadResult read_log(const std::string& path);

// completion_index, loss, ci_lower, ci_upper, best_so_far (CSV with header).
std::string convergence_table(const std::vector<EvaluationRecord>& records);

// loss, loss_std, param_count for scatter plotting (CSV with header).
std::string scatter_table(const std::vector<EvaluationRecord>& records);

// Indices of records not dominated in (loss, loss_std); failed records are
// excluded.
std::vector<std::size_t> pareto_set(const std::vector<EvaluationRecord>& records);

// Human-readable incumbent + Pareto summary.
std::string summary_text(const std::vector<EvaluationRecord>& records);

}  // namespace surropt
