#pragma once

#include "glue/pipeline/evaluator.hpp"

namespace glue::pipeline {

// Comparison table: rows = method/ablation, columns = (task, condition),
// cells = mean success rate across the reports (seeds) in that cell.
struct ReportTable {
  std::vector<std::string> rows;                      // ablation labels
  std::vector<std::pair<std::string, std::string>> cols;  // (task, condition)
  std::vector<std::vector<double>> cells;             // rows x cols
  std::vector<std::vector<int>> report_counts;        // reports averaged per cell

  std::string to_text() const;
  nlohmann::json to_json() const;
};

// Throws ProtocolMismatch when reports disagree on condition names/counts.
ReportTable report_tables(const std::vector<EvalReport>& reports);

}  // namespace glue::pipeline
