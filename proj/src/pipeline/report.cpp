#include "glue/pipeline/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace glue::pipeline {

ReportTable report_tables(const std::vector<EvalReport>& reports) {
  require(!reports.empty(), ErrorCode::invalid_argument, "report_tables: no reports");

  // protocol check: identical (condition, count) signature everywhere
  std::vector<std::pair<std::string, size_t>> signature;
  for (const auto& c : reports[0].conditions) signature.push_back({c.name, c.episodes.size()});
  for (const auto& r : reports) {
    std::vector<std::pair<std::string, size_t>> sig;
    for (const auto& c : r.conditions) sig.push_back({c.name, c.episodes.size()});
    require(sig == signature, ErrorCode::protocol_mismatch,
            "report_tables: reports follow different protocols");
  }

  ReportTable table;
  for (const auto& r : reports) {
    if (std::find(table.rows.begin(), table.rows.end(), r.ablation) == table.rows.end())
      table.rows.push_back(r.ablation);
    for (const auto& c : r.conditions) {
      const auto col = std::make_pair(r.task, c.name);
      if (std::find(table.cols.begin(), table.cols.end(), col) == table.cols.end())
        table.cols.push_back(col);
    }
  }
  table.cells.assign(table.rows.size(), std::vector<double>(table.cols.size(), 0.0));
  table.report_counts.assign(table.rows.size(), std::vector<int>(table.cols.size(), 0));
  for (const auto& r : reports) {
    const size_t row = std::find(table.rows.begin(), table.rows.end(), r.ablation) -
                       table.rows.begin();
    for (const auto& c : r.conditions) {
      const auto col_key = std::make_pair(r.task, c.name);
      const size_t col =
          std::find(table.cols.begin(), table.cols.end(), col_key) - table.cols.begin();
      table.cells[row][col] += c.rate();
      table.report_counts[row][col] += 1;
    }
  }
  for (size_t i = 0; i < table.rows.size(); ++i)
    for (size_t j = 0; j < table.cols.size(); ++j)
      if (table.report_counts[i][j] > 0) table.cells[i][j] /= table.report_counts[i][j];
  return table;
}

std::string ReportTable::to_text() const {
  size_t label_w = 8;
  for (const auto& r : rows) label_w = std::max(label_w, r.size());
  std::ostringstream out;
  out << std::string(label_w, ' ');
  std::vector<std::string> headers;
  for (const auto& [task, cond] : cols) headers.push_back(task + "/" + cond);
  for (const auto& h : headers) out << "  " << h;
  out << "\n";
  for (size_t i = 0; i < rows.size(); ++i) {
    out << rows[i] << std::string(label_w - rows[i].size(), ' ');
    for (size_t j = 0; j < cols.size(); ++j) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%*.1f", static_cast<int>(headers[j].size() + 2),
                    cells[i][j] * 100.0);
      out << buf;
    }
    out << "\n";
  }
  return out.str();
}

nlohmann::json ReportTable::to_json() const {
  nlohmann::json j;
  j["format"] = "glue-report-table/1";
  j["rows"] = rows;
  nlohmann::json cols_json = nlohmann::json::array();
  for (const auto& [task, cond] : cols) cols_json.push_back({{"task", task}, {"condition", cond}});
  j["cols"] = cols_json;
  j["rates"] = cells;
  j["reports_per_cell"] = report_counts;
  return j;
}

}  // namespace glue::pipeline
