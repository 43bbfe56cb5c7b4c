#include <crosswatch/evaluation.hpp>

#include <algorithm>
#include <iomanip>
#include <numeric>

#include <json.hpp>

namespace crosswatch {

EvaluationReport match_events(std::span<const ConflictEvent> emitted,
                              std::span<const GroundTruthEvent> truth,
                              int frame_tolerance) {
  EvaluationReport report;
  report.total_conflicts = static_cast<int>(truth.size());

  // Process emissions in frame order so the result does not depend on how
  // the caller ordered them.
  std::vector<std::size_t> order(emitted.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (emitted[a].frame != emitted[b].frame)
      return emitted[a].frame < emitted[b].frame;
    return emitted[a].participants < emitted[b].participants;
  });

  std::vector<std::optional<std::size_t>> truth_match(truth.size());
  for (const std::size_t e : order) {
    const auto& event = emitted[e];
    bool matched = false;
    for (std::size_t t = 0; t < truth.size(); ++t) {
      if (truth_match[t]) continue;
      if (truth[t].type != event.type) continue;
      if (event.frame < truth[t].first_frame - frame_tolerance ||
          event.frame > truth[t].last_frame + frame_tolerance)
        continue;
      truth_match[t] = e;
      matched = true;
      break;
    }
    if (!matched) report.false_alarm_indices.push_back(e);
  }

  for (std::size_t t = 0; t < truth.size(); ++t) {
    report.matches.push_back({static_cast<int>(t), truth_match[t]});
    if (truth_match[t]) ++report.detected;
  }
  report.false_alarms = static_cast<int>(report.false_alarm_indices.size());

  if (report.total_conflicts > 0)
    report.detection_rate =
        static_cast<double>(report.detected) / report.total_conflicts;
  report.false_alarm_rate = static_cast<double>(report.false_alarms) /
                            std::max(report.total_conflicts, 1);
  return report;
}

EvaluationReport aggregate(std::span<const EvaluationReport> reports) {
  EvaluationReport total;
  for (const auto& r : reports) {
    total.total_conflicts += r.total_conflicts;
    total.detected += r.detected;
    total.false_alarms += r.false_alarms;
  }
  if (total.total_conflicts > 0)
    total.detection_rate =
        static_cast<double>(total.detected) / total.total_conflicts;
  total.false_alarm_rate = static_cast<double>(total.false_alarms) /
                           std::max(total.total_conflicts, 1);
  return total;
}

void save_report(const EvaluationReport& report, std::ostream& out) {
  nlohmann::ordered_json doc;
  doc["total_conflicts"] = report.total_conflicts;
  doc["detected"] = report.detected;
  doc["false_alarms"] = report.false_alarms;
  if (report.detection_rate)
    doc["detection_rate"] = *report.detection_rate;
  else
    doc["detection_rate"] = nullptr;
  doc["false_alarm_rate"] = report.false_alarm_rate;
  doc["matches"] = nlohmann::json::array();
  for (const auto& m : report.matches) {
    nlohmann::ordered_json row;
    row["truth_index"] = m.truth_index;
    if (m.emitted_index)
      row["emitted_index"] = *m.emitted_index;
    else
      row["emitted_index"] = nullptr;
    doc["matches"].push_back(std::move(row));
  }
  doc["false_alarm_indices"] = report.false_alarm_indices;
  out << doc.dump(2) << '\n';
}

void print_report(const EvaluationReport& report, std::ostream& out) {
  out << "conflicts: " << report.total_conflicts
      << "  detected: " << report.detected
      << "  false alarms: " << report.false_alarms << '\n';
  if (report.detection_rate)
    out << "DR: " << std::fixed << std::setprecision(2)
        << 100.0 * *report.detection_rate << "%";
  else
    out << "DR: n/a";
  out << "  FAR: " << std::fixed << std::setprecision(2)
      << 100.0 * report.false_alarm_rate << "%\n";
}

std::vector<SweepPoint> sweep(
    const std::map<std::string, std::vector<double>>& grid,
    const SweepRunner& runner) {
  std::vector<std::map<std::string, double>> points{{}};
  for (const auto& [key, values] : grid) {
    std::vector<std::map<std::string, double>> expanded;
    expanded.reserve(points.size() * values.size());
    for (const auto& point : points) {
      for (const double v : values) {
        auto next = point;
        next[key] = v;
        expanded.push_back(std::move(next));
      }
    }
    points = std::move(expanded);
  }

  std::vector<SweepPoint> rows;
  rows.reserve(points.size());
  for (const auto& params : points) {
    const auto report = runner(params);
    SweepPoint row;
    row.params = params;
    row.detection_rate = report.detection_rate;
    row.false_alarm_rate = report.false_alarm_rate;
    row.detected = report.detected;
    row.total_conflicts = report.total_conflicts;
    row.false_alarms = report.false_alarms;
    rows.push_back(std::move(row));
  }

  std::stable_sort(rows.begin(), rows.end(),
                   [](const SweepPoint& a, const SweepPoint& b) {
                     const double dra = a.detection_rate.value_or(-1.0);
                     const double drb = b.detection_rate.value_or(-1.0);
                     if (dra != drb) return dra > drb;
                     return a.false_alarm_rate < b.false_alarm_rate;
                   });
  return rows;
}

void save_sweep_table(std::span<const SweepPoint> points, std::ostream& out) {
  nlohmann::ordered_json doc = nlohmann::json::array();
  for (const auto& p : points) {
    nlohmann::ordered_json row;
    row["params"] = p.params;
    if (p.detection_rate)
      row["detection_rate"] = *p.detection_rate;
    else
      row["detection_rate"] = nullptr;
    row["false_alarm_rate"] = p.false_alarm_rate;
    row["detected"] = p.detected;
    row["total_conflicts"] = p.total_conflicts;
    row["false_alarms"] = p.false_alarms;
    doc.push_back(std::move(row));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace crosswatch
