#pragma once

#include <functional>
#include <iosfwd>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace advice::sim {

/// One evaluation point of a learning run. `value_gap` belongs to the policy
/// the learner would output at `episode`; regret charges it for every
/// episode since the previous row.
struct MetricsRow {
  std::size_t episode = 0;
  double value_gap = 0.0;
  double cumulative_regret = 0.0;
  double advice_count = 0.0;
  std::size_t num_updates = 0;
  double w_root = std::numeric_limits<double>::quiet_NaN();
  bool stopped = false;
};

struct MetricsLog {
  std::vector<MetricsRow> rows;

  double final_value_gap() const { return rows.empty() ? 0.0 : rows.back().value_gap; }
  double final_regret() const { return rows.empty() ? 0.0 : rows.back().cumulative_regret; }
};

using RowCallback = std::function<void(const MetricsRow&)>;

/// Keeps the regret bookkeeping shared by every learner.
class RegretTracker {
 public:
  /// Appends a row at `episode` charging `value_gap` for the episodes since the last row.
  MetricsRow& record(MetricsLog& log, std::size_t episode, double value_gap);

 private:
  std::size_t last_episode_ = 0;
  double cumulative_ = 0.0;
};

/// CSV column layouts.
///   regret: episode,value_gap,cumulative_regret,num_updates
///   rfe:    episode,W_root,stopped,value_gap_beta0
enum class CsvSchema { regret, rfe };

void write_csv_header(std::ostream& out, CsvSchema schema);
void write_csv_row(std::ostream& out, const MetricsRow& row, CsvSchema schema);
std::string to_csv(const MetricsLog& log, CsvSchema schema);

/// Shortest decimal form that parses back to the same double.
std::string format_double(double x);

/// Row-wise arithmetic mean of logs with identical episode columns.
MetricsLog mean_log(std::span<const MetricsLog> logs);

/// Regret accumulated over episodes in (from, to], read off the log's
/// piecewise-constant gap profile.
double regret_between(const MetricsLog& log, std::size_t from, std::size_t to);

}  // namespace advice::sim
