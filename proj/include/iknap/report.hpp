#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "iknap/sweep.hpp"

namespace iknap {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace csv {

inline std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

inline std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cell += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cell));
      cell.clear();
    } else {
      cell += c;
    }
  }
  cells.push_back(std::move(cell));
  return cells;
}

}  // namespace csv

inline const char* kTrialsHeader =
    "parameter,value_index,value,scheme,trial_index,seed,config_digest,status,makespan_s,timed_out,"
    "agent_subject_collisions,agent_agent_collisions,opt_time_mean_s,opt_time_max_s,"
    "bandwidth_mean_units,deliveries_total,epochs";

inline std::string trial_row_to_csv(const TrialRow& r) {
  std::ostringstream out;
  out << csv::escape(r.parameter) << ',' << r.value_index << ',' << csv::fmt(r.value) << ','
      << scheme_name(r.scheme) << ',' << r.trial_index << ',' << r.seed << ','
      << r.result.config_digest << ',' << csv::escape(r.status) << ',' << csv::fmt(r.result.makespan)
      << ',' << (r.result.timed_out ? 1 : 0) << ',' << r.result.agent_subject_collisions << ','
      << r.result.agent_agent_collisions << ',' << csv::fmt(r.result.opt_time_mean) << ','
      << csv::fmt(r.result.opt_time_max) << ',' << csv::fmt(r.result.bandwidth_mean) << ','
      << r.result.deliveries_total << ',' << r.result.epochs.size();
  return out.str();
}

inline void write_trials_csv(const std::vector<TrialRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kTrialsHeader << '\n';
  for (const TrialRow& r : rows) out << trial_row_to_csv(r) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Rebuilds rows from trials.csv. Per-epoch logs are not serialized; only
/// their count is restored (as empty entries), so a write/read/write cycle is
/// byte-stable.
inline std::vector<TrialRow> read_trials_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw IoError("empty csv '" + path + "'");
  if (line != kTrialsHeader) throw IoError("unexpected header in '" + path + "'");
  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto c = csv::split_line(line);
    if (c.size() != 17) throw IoError("bad row in '" + path + "': " + line);
    TrialRow r;
    r.parameter = c[0];
    r.value_index = std::stoi(c[1]);
    r.value = std::stod(c[2]);
    r.scheme = parse_scheme(c[3]);
    r.trial_index = std::stoi(c[4]);
    r.seed = std::stoull(c[5]);
    r.result.config_digest = c[6];
    r.status = c[7];
    r.result.scheme = r.scheme;
    r.result.seed = r.seed;
    r.result.makespan = std::stod(c[8]);
    r.result.timed_out = c[9] == "1";
    r.result.agent_subject_collisions = std::stoi(c[10]);
    r.result.agent_agent_collisions = std::stoi(c[11]);
    r.result.opt_time_mean = std::stod(c[12]);
    r.result.opt_time_max = std::stod(c[13]);
    r.result.bandwidth_mean = std::stod(c[14]);
    r.result.deliveries_total = std::stoi(c[15]);
    r.result.epochs.resize(std::stoul(c[16]));
    rows.push_back(std::move(r));
  }
  return rows;
}

inline const char* kAggregateHeader =
    "parameter,value_index,value,scheme,trials,failures,timeouts,makespan_mean_s,makespan_stderr_s,"
    "completion_rate,agent_subject_collisions_mean,agent_agent_collisions_mean,opt_time_mean_s,"
    "bandwidth_mean_units,deliveries_mean";

inline void write_aggregate_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << kAggregateHeader << '\n';
  for (const AggregateRow& a : rows) {
    out << csv::escape(a.parameter) << ',' << a.value_index << ',' << csv::fmt(a.value) << ','
        << scheme_name(a.scheme) << ',' << a.trials << ',' << a.failures << ',' << a.timeouts << ','
        << csv::fmt(a.makespan_mean) << ',' << csv::fmt(a.makespan_stderr) << ','
        << csv::fmt(a.completion_rate) << ',' << csv::fmt(a.agent_subject_collisions_mean) << ','
        << csv::fmt(a.agent_agent_collisions_mean) << ',' << csv::fmt(a.opt_time_mean) << ','
        << csv::fmt(a.bandwidth_mean) << ',' << csv::fmt(a.deliveries_mean) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

/// Self-contained SVG line chart of mean makespan (with stderr bars) per
/// scheme across the swept values.
inline void write_sweep_svg(const std::vector<AggregateRow>& aggs, const std::string& path,
                            const std::string& x_label = "") {
  const double W = 640, H = 420, L = 70, R = 20, T = 40, B = 60;
  double x_min = 1e300, x_max = -1e300, y_min = 0.0, y_max = -1e300;
  for (const AggregateRow& a : aggs) {
    if (a.trials == 0) continue;
    x_min = std::min(x_min, a.value);
    x_max = std::max(x_max, a.value);
    y_max = std::max(y_max, a.makespan_mean + a.makespan_stderr);
  }
  if (x_max <= x_min) {
    x_min -= 1.0;
    x_max += 1.0;
  }
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.08;

  auto sx = [&](double v) { return L + (v - x_min) / (x_max - x_min) * (W - L - R); };
  auto sy = [&](double v) { return H - B - (v - y_min) / (y_max - y_min) * (H - T - B); };

  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << W << "' height='" << H
      << "' font-family='sans-serif' font-size='12'>\n";
  out << "<rect width='100%' height='100%' fill='white'/>\n";
  out << "<line x1='" << L << "' y1='" << H - B << "' x2='" << W - R << "' y2='" << H - B
      << "' stroke='black'/>\n";
  out << "<line x1='" << L << "' y1='" << T << "' x2='" << L << "' y2='" << H - B
      << "' stroke='black'/>\n";

  for (int i = 0; i <= 5; ++i) {
    const double yv = y_min + (y_max - y_min) * i / 5.0;
    out << "<line x1='" << L - 4 << "' y1='" << sy(yv) << "' x2='" << L << "' y2='" << sy(yv)
        << "' stroke='black'/>\n";
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", yv);
    out << "<text x='" << L - 8 << "' y='" << sy(yv) + 4 << "' text-anchor='end'>" << buf
        << "</text>\n";
    const double xv = x_min + (x_max - x_min) * i / 5.0;
    out << "<line x1='" << sx(xv) << "' y1='" << H - B << "' x2='" << sx(xv) << "' y2='" << H - B + 4
        << "' stroke='black'/>\n";
    std::snprintf(buf, sizeof(buf), "%.3g", xv);
    out << "<text x='" << sx(xv) << "' y='" << H - B + 18 << "' text-anchor='middle'>" << buf
        << "</text>\n";
  }
  out << "<text x='" << (L + W - R) / 2 << "' y='" << H - 16 << "' text-anchor='middle'>"
      << (x_label.empty() ? (aggs.empty() ? "value" : aggs.front().parameter) : x_label)
      << "</text>\n";
  out << "<text x='16' y='" << (T + H - B) / 2
      << "' text-anchor='middle' transform='rotate(-90 16 " << (T + H - B) / 2
      << ")'>makespan (s)</text>\n";

  const SchemeKind order[] = {SchemeKind::IKNAP, SchemeKind::NO_COMM, SchemeKind::BROADCAST_BASELINE};
  const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c"};
  double legend_y = T + 6;
  for (int s = 0; s < 3; ++s) {
    std::vector<const AggregateRow*> pts;
    for (const AggregateRow& a : aggs)
      if (a.scheme == order[s] && a.trials > 0) pts.push_back(&a);
    if (pts.empty()) continue;
    std::sort(pts.begin(), pts.end(),
              [](const AggregateRow* x, const AggregateRow* y) { return x->value < y->value; });
    out << "<polyline fill='none' stroke='" << colors[s] << "' stroke-width='2' points='";
    for (const AggregateRow* a : pts) out << sx(a->value) << ',' << sy(a->makespan_mean) << ' ';
    out << "'/>\n";
    for (const AggregateRow* a : pts) {
      out << "<circle cx='" << sx(a->value) << "' cy='" << sy(a->makespan_mean) << "' r='3' fill='"
          << colors[s] << "'/>\n";
      if (a->makespan_stderr > 0.0)
        out << "<line x1='" << sx(a->value) << "' y1='" << sy(a->makespan_mean - a->makespan_stderr)
            << "' x2='" << sx(a->value) << "' y2='" << sy(a->makespan_mean + a->makespan_stderr)
            << "' stroke='" << colors[s] << "' stroke-width='1.5'/>\n";
    }
    out << "<rect x='" << W - R - 120 << "' y='" << legend_y << "' width='14' height='3' fill='"
        << colors[s] << "'/>\n";
    out << "<text x='" << W - R - 100 << "' y='" << legend_y + 6 << "'>" << scheme_name(order[s])
        << "</text>\n";
    legend_y += 18;
  }
  out << "</svg>\n";
  if (!out) throw IoError("write failed for '" + path + "'");
}

}  // namespace iknap
