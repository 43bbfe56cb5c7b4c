// crosswatch: intersection tracking and trajectory-conflict detection from
// per-frame road-user detections.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include <crosswatch/pipeline.hpp>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitConfigError = 2;

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CommonOptions {
  std::string config_path;
  std::string input_path;
  std::string calibration_path;
  std::string output_path;
  std::optional<std::uint64_t> seed;
  std::optional<double> min_confidence;
};

crosswatch::PipelineConfig load_config(const CommonOptions& opts) {
  crosswatch::PipelineConfig cfg;
  if (!opts.config_path.empty())
    cfg = crosswatch::load_pipeline_config_file(opts.config_path);
  if (opts.min_confidence) {
    if (*opts.min_confidence < 0.0 || *opts.min_confidence > 1.0)
      throw std::invalid_argument("--min-confidence must lie in [0,1]");
    cfg.min_confidence = *opts.min_confidence;
  }
  if (opts.seed) cfg.seed = *opts.seed;
  return cfg;
}

std::optional<crosswatch::Homography> load_calibration_opt(
    const CommonOptions& opts) {
  if (opts.calibration_path.empty()) return std::nullopt;
  const auto cal = crosswatch::load_calibration_file(opts.calibration_path);
  if (cal.fitted) {
    std::cerr << "calibration: fitted from points, residual "
              << cal.fit_residual << '\n';
    if (cal.residual_warning)
      std::cerr << "calibration: warning: fit residual above 1e-6; check the "
                   "point pairs\n";
  }
  return cal.homography;
}

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input: " + path);
  return in;
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output: " + path);
  return out;
}

// Writes either to a file or to stdout.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) {
    if (!path.empty()) {
      file_ = open_output(path);
      out_ = &file_;
    }
  }
  std::ostream& stream() { return *out_; }

 private:
  std::ofstream file_;
  std::ostream* out_ = &std::cout;
};

std::vector<crosswatch::Scenario> select_scenarios(const std::string& name) {
  auto suite = crosswatch::builtin_suite();
  if (name == "all" || name == "suite") return suite;
  const auto* scenario = crosswatch::find_scenario(suite, name);
  if (!scenario) {
    std::string names;
    for (const auto& s : suite) names += "\n  " + s.name;
    throw InputError("unknown scenario \"" + name + "\"; available:" + names);
  }
  return {*scenario};
}

void print_throughput(const crosswatch::RunStats& stats) {
  std::cerr << "processed " << stats.frames << " frames in " << std::fixed
            << std::setprecision(3) << stats.seconds << " s ("
            << std::setprecision(0) << stats.frames_per_second() << " fps)\n";
}

void print_event_summary(const crosswatch::ConflictEvent& e) {
  std::cerr << "[frame " << e.frame << "] " << crosswatch::to_string(e.type)
            << ' ' << crosswatch::to_string(e.severity) << " tracks ("
            << e.participants.first << ',' << e.participants.second
            << ") at (" << std::fixed << std::setprecision(1) << e.px << ','
            << e.py << ") angle " << e.angle_deg << " deg, speeds "
            << e.speeds_before.first << '/' << e.speeds_before.second
            << " -> " << e.speeds_after.first << '/' << e.speeds_after.second
            << " km/h\n";
}

int run_track(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  auto in = open_input(opts.input_path);
  OutputTarget out(opts.output_path);
  const auto stats = crosswatch::run_stream(
      in, cfg, std::nullopt,
      [&](std::int64_t frame, const crosswatch::Track& track) {
        crosswatch::write_track_dump_line(out.stream(), frame, track);
      },
      nullptr);
  print_throughput(stats);
  return kExitOk;
}

int run_detect(const CommonOptions& opts) {
  const auto cfg = load_config(opts);
  const auto calibration = load_calibration_opt(opts);
  if (!calibration)
    throw std::invalid_argument("detect requires --calibration");
  auto in = open_input(opts.input_path);
  OutputTarget out(opts.output_path);
  const auto stats = crosswatch::run_stream(
      in, cfg, calibration, nullptr, [&](const crosswatch::ConflictEvent& e) {
        crosswatch::serialize(e, out.stream());
        out.stream().flush();  // events go out as they are determined
        print_event_summary(e);
      });
  print_throughput(stats);
  std::cerr << stats.events << " conflict event(s)\n";
  return kExitOk;
}

int run_evaluate(const CommonOptions& opts, const std::string& scenario_name,
                 const std::string& truth_path) {
  const auto cfg = load_config(opts);
  crosswatch::EvaluationReport total;

  if (!scenario_name.empty()) {
    auto scenarios = select_scenarios(scenario_name);
    if (opts.seed)
      for (auto& s : scenarios) s.seed = *opts.seed;
    const auto [reports, aggregated] =
        crosswatch::evaluate_suite(scenarios, cfg);
    for (std::size_t i = 0; i < scenarios.size(); ++i) {
      std::cout << std::left << std::setw(24) << scenarios[i].name
                << "conflicts " << reports[i].total_conflicts << "  detected "
                << reports[i].detected << "  false alarms "
                << reports[i].false_alarms << '\n';
    }
    total = aggregated;
  } else {
    if (truth_path.empty())
      throw InputError("evaluate needs --scenario or --input with --truth");
    const auto calibration = load_calibration_opt(opts);
    if (!calibration)
      throw std::invalid_argument(
          "evaluate on a stream requires --calibration");
    auto truth_in = open_input(truth_path);
    const auto truth = crosswatch::load_truth(truth_in);
    auto in = open_input(opts.input_path);
    std::vector<crosswatch::ConflictEvent> events;
    crosswatch::run_stream(in, cfg, calibration, nullptr,
                           [&](const crosswatch::ConflictEvent& e) {
                             events.push_back(e);
                           });
    total = crosswatch::match_events(events, truth, cfg.frame_tolerance);
  }

  crosswatch::print_report(total, std::cout);
  if (!opts.output_path.empty()) {
    auto out = open_output(opts.output_path);
    crosswatch::save_report(total, out);
  }
  return kExitOk;
}

int run_simulate(const CommonOptions& opts, const std::string& scenario_name) {
  std::vector<crosswatch::Scenario> scenarios;
  if (!opts.input_path.empty()) {
    auto in = open_input(opts.input_path);
    try {
      scenarios.push_back(crosswatch::load_scenario(in));
    } catch (const std::invalid_argument& e) {
      throw InputError(e.what());
    }
  } else {
    scenarios =
        select_scenarios(scenario_name.empty() ? "all" : scenario_name);
  }
  if (opts.seed)
    for (auto& s : scenarios) s.seed = *opts.seed;

  const std::filesystem::path dir(
      opts.output_path.empty() ? "." : opts.output_path);
  std::filesystem::create_directories(dir);

  for (const auto& scenario : scenarios) {
    const auto base = (dir / scenario.name).string();
    const auto stream_path = base + ".stream.jsonl";
    const auto truth_path = base + ".truth.json";
    auto stream_out = open_output(stream_path);
    crosswatch::serialize(crosswatch::render(scenario), stream_out);
    auto truth_out = open_output(truth_path);
    crosswatch::save_truth(scenario.truth, truth_out);
    std::cout << scenario.name << ": " << stream_path << ' ' << truth_path
              << '\n';
  }
  return kExitOk;
}

int run_sweep(const CommonOptions& opts, const std::string& scenario_name,
              const std::string& grid_path) {
  const auto cfg = load_config(opts);
  auto scenarios =
      select_scenarios(scenario_name.empty() ? "all" : scenario_name);
  if (opts.seed)
    for (auto& s : scenarios) s.seed = *opts.seed;

  std::map<std::string, std::vector<double>> grid;
  if (!grid_path.empty()) {
    auto in = open_input(grid_path);
    nlohmann::json doc;
    try {
      doc = nlohmann::json::parse(in);
      for (const auto& [key, values] : doc.items())
        grid[key] = values.get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
      throw InputError(std::string("grid file: ") + e.what());
    }
  }

  const auto rows =
      crosswatch::sweep(grid, crosswatch::make_suite_runner(scenarios, cfg));
  for (const auto& row : rows) {
    std::cout << std::fixed << std::setprecision(4) << "DR "
              << (row.detection_rate ? *row.detection_rate : 0.0) << "  FAR "
              << row.false_alarm_rate << "  ";
    for (const auto& [key, value] : row.params)
      std::cout << key << '=' << value << ' ';
    if (row.params.empty()) std::cout << "(defaults)";
    std::cout << '\n';
  }
  if (!opts.output_path.empty()) {
    auto out = open_output(opts.output_path);
    crosswatch::save_sweep_table(rows, out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "crosswatch: multi-object tracking and trajectory-conflict detection "
      "for intersection surveillance"};
  app.require_subcommand(1);

  CommonOptions opts;
  std::string scenario_name;
  std::string truth_path;
  std::string grid_path;
  int result = kExitOk;

  const auto add_common = [&](CLI::App* cmd, bool with_input) {
    cmd->add_option("--config", opts.config_path, "pipeline config JSON");
    if (with_input) cmd->add_option("--input", opts.input_path, "input path");
    cmd->add_option("--calibration", opts.calibration_path,
                    "calibration JSON (H matrix or point pairs)");
    cmd->add_option("--output", opts.output_path, "output path");
    cmd->add_option("--seed", opts.seed, "seed override");
    cmd->add_option("--min-confidence", opts.min_confidence,
                    "drop detections below this confidence");
  };

  auto* track =
      app.add_subcommand("track", "track a detection stream and dump tracks");
  add_common(track, true);
  track->callback([&] { result = run_track(opts); });

  auto* detect = app.add_subcommand(
      "detect", "run the full pipeline and emit conflict events");
  add_common(detect, true);
  detect->callback([&] { result = run_detect(opts); });

  auto* evaluate = app.add_subcommand(
      "evaluate", "run end to end and score against ground truth");
  add_common(evaluate, true);
  evaluate->add_option("--scenario", scenario_name,
                       "builtin scenario name or \"all\"");
  evaluate->add_option("--truth", truth_path, "ground-truth manifest");
  evaluate->callback(
      [&] { result = run_evaluate(opts, scenario_name, truth_path); });

  auto* simulate = app.add_subcommand(
      "simulate", "render a scenario to a stream and truth manifest");
  simulate->add_option("scenario", scenario_name,
                       "builtin scenario name or \"all\"");
  add_common(simulate, true);
  simulate->callback([&] { result = run_simulate(opts, scenario_name); });

  auto* sweep_cmd = app.add_subcommand(
      "sweep", "grid-sweep parameters over a scenario suite");
  add_common(sweep_cmd, false);
  sweep_cmd->add_option("--scenario", scenario_name,
                        "builtin scenario name or \"all\"");
  sweep_cmd->add_option("--grid", grid_path,
                        "JSON object: parameter -> list of values");
  sweep_cmd->callback(
      [&] { result = run_sweep(opts, scenario_name, grid_path); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfigError;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  } catch (const crosswatch::StreamError& e) {
    std::cerr << "error: corrupt detection stream at " << e.what() << '\n';
    return kExitInputError;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInputError;
  }
  return result;
}
