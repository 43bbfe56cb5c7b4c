#pragma once

#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <crosswatch/conflict.hpp>
#include <crosswatch/scenario.hpp>

namespace crosswatch {

struct EventMatch {
  int truth_index = 0;
  std::optional<std::size_t> emitted_index;  // nullopt: missed conflict
};

struct EvaluationReport {
  int total_conflicts = 0;
  int detected = 0;
  int false_alarms = 0;
  /// detected / total_conflicts; empty when there are no true conflicts.
  std::optional<double> detection_rate;
  /// false_alarms / total_conflicts, denominator falling back to 1 when
  /// there are no true conflicts. May exceed 1 by construction.
  double false_alarm_rate = 0.0;
  std::vector<EventMatch> matches;
  std::vector<std::size_t> false_alarm_indices;
};

/// Greedy one-to-one matching of emitted events against ground truth. An
/// emitted event matches a truth event when the types agree and the event
/// frame lies within the truth frame range widened by `frame_tolerance`.
EvaluationReport match_events(std::span<const ConflictEvent> emitted,
                              std::span<const GroundTruthEvent> truth,
                              int frame_tolerance);

/// Sums counts over per-scenario reports and recomputes the rates.
EvaluationReport aggregate(std::span<const EvaluationReport> reports);

void save_report(const EvaluationReport& report, std::ostream& out);
void print_report(const EvaluationReport& report, std::ostream& out);

/// One evaluated grid point of a parameter sweep.
struct SweepPoint {
  std::map<std::string, double> params;
  std::optional<double> detection_rate;
  double false_alarm_rate = 0.0;
  int detected = 0;
  int total_conflicts = 0;
  int false_alarms = 0;
};

using SweepRunner =
    std::function<EvaluationReport(const std::map<std::string, double>&)>;

/// Evaluates the runner on the cartesian product of the grid and returns
/// rows sorted by detection rate descending, false alarm rate ascending.
std::vector<SweepPoint> sweep(
    const std::map<std::string, std::vector<double>>& grid,
    const SweepRunner& runner);

void save_sweep_table(std::span<const SweepPoint> points, std::ostream& out);

}  // namespace crosswatch
