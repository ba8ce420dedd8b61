#include "advice/sim/metrics.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace advice::sim {

MetricsRow& RegretTracker::record(MetricsLog& log, std::size_t episode, double value_gap) {
  cumulative_ += value_gap * static_cast<double>(episode - last_episode_);
  last_episode_ = episode;
  MetricsRow row;
  row.episode = episode;
  row.value_gap = value_gap;
  row.cumulative_regret = cumulative_;
  log.rows.push_back(row);
  return log.rows.back();
}

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, result.ptr);
}

void write_csv_header(std::ostream& out, CsvSchema schema) {
  switch (schema) {
    case CsvSchema::regret:
      out << "episode,value_gap,cumulative_regret,num_updates\n";
      break;
    case CsvSchema::rfe:
      out << "episode,W_root,stopped,value_gap_beta0\n";
      break;
  }
}

void write_csv_row(std::ostream& out, const MetricsRow& row, CsvSchema schema) {
  switch (schema) {
    case CsvSchema::regret:
      out << row.episode << ',' << format_double(row.value_gap) << ','
          << format_double(row.cumulative_regret) << ',' << row.num_updates << '\n';
      break;
    case CsvSchema::rfe:
      out << row.episode << ',' << format_double(row.w_root) << ',' << (row.stopped ? 1 : 0)
          << ',' << format_double(row.value_gap) << '\n';
      break;
  }
}

std::string to_csv(const MetricsLog& log, CsvSchema schema) {
  std::ostringstream out;
  write_csv_header(out, schema);
  for (const MetricsRow& row : log.rows) write_csv_row(out, row, schema);
  return out.str();
}

MetricsLog mean_log(std::span<const MetricsLog> logs) {
  if (logs.empty()) return {};
  const std::size_t n = logs.front().rows.size();
  for (const MetricsLog& log : logs) {
    if (log.rows.size() != n) throw std::invalid_argument("mean_log: logs differ in length");
  }
  const double k = static_cast<double>(logs.size());
  MetricsLog out;
  out.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    MetricsRow& row = out.rows[i];
    row.episode = logs.front().rows[i].episode;
    double gap = 0.0, regret = 0.0, advice = 0.0, updates = 0.0, w = 0.0, stopped = 0.0;
    for (const MetricsLog& log : logs) {
      const MetricsRow& r = log.rows[i];
      if (r.episode != row.episode) {
        throw std::invalid_argument("mean_log: logs are not aligned on episodes");
      }
      gap += r.value_gap;
      regret += r.cumulative_regret;
      advice += r.advice_count;
      updates += static_cast<double>(r.num_updates);
      w += r.w_root;
      stopped += r.stopped ? 1.0 : 0.0;
    }
    row.value_gap = gap / k;
    row.cumulative_regret = regret / k;
    row.advice_count = advice / k;
    row.num_updates = static_cast<std::size_t>(std::llround(updates / k));
    row.w_root = w / k;
    row.stopped = stopped == k;
  }
  return out;
}

double regret_between(const MetricsLog& log, std::size_t from, std::size_t to) {
  double total = 0.0;
  std::size_t previous = 0;
  for (const MetricsRow& row : log.rows) {
    // the row's gap applies to episodes (previous, row.episode]
    const std::size_t lo = std::max(previous, from);
    const std::size_t hi = std::min(row.episode, to);
    if (hi > lo) total += row.value_gap * static_cast<double>(hi - lo);
    previous = row.episode;
  }
  return total;
}

}  // namespace advice::sim
