#include <cstdint>
#include <fstream>
#include <iostream>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eot/config.hpp"
#include "eot/eval.hpp"
#include "eot/records.hpp"
#include "eot/scenario_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitDegenerate = 2;

eot::AppConfig load_app_config(const std::string& config_path) {
  eot::AppConfig cfg;
  if (!config_path.empty()) cfg = eot::load_config(config_path);
  const auto overridden = eot::apply_env_overrides(cfg);
  for (const std::string& name : overridden) {
    std::cerr << "config override from environment: " << name << "\n";
  }
  return cfg;
}

int cmd_simulate(const std::string& scenario_arg, const std::string& config_path,
                 std::uint64_t seed, const std::string& out_path, bool truth) {
  const eot::Scenario scenario = eot::resolve_scenario(scenario_arg);
  const eot::AppConfig cfg = load_app_config(config_path);

  std::ofstream file;
  std::ostream* os = &std::cout;
  if (!out_path.empty() && out_path != "-") {
    file.open(out_path);
    if (!file) throw std::runtime_error("cannot open output file " + out_path);
    os = &file;
  }

  eot::write_header_record(*os, scenario.mount, cfg.sensor.frame_rate);
  const double dt = 1.0 / cfg.sensor.frame_rate;
  const long n_frames =
      static_cast<long>(std::floor(scenario.duration * cfg.sensor.frame_rate)) + 1;
  for (long k = 0; k < n_frames; ++k) {
    std::mt19937_64 rng(
        eot::derive_seed(seed ^ 0x73696d756c617465ULL, static_cast<std::uint64_t>(k)));
    const eot::SimFrame sim =
        eot::generate_frame(scenario, k * dt, k, cfg.sensor, cfg.noise, rng);
    eot::write_frame_records(*os, sim, truth);
  }
  return kExitOk;
}

int cmd_run(const std::string& scenario_arg, const std::string& frames_path,
            const std::string& config_path, std::uint64_t seed, const std::string& out_dir) {
  const eot::AppConfig cfg = load_app_config(config_path);

  eot::RunResult result;
  if (!frames_path.empty()) {
    std::ifstream in(frames_path);
    if (!in) throw std::runtime_error("cannot open frame stream " + frames_path);
    const eot::RecordStream stream = eot::read_records(in, cfg.run.ego_max_skew);
    result = eot::run_stream(stream, cfg, seed, frames_path);
  } else {
    const eot::Scenario scenario = eot::resolve_scenario(scenario_arg);
    result = eot::run_scenario(scenario, cfg, seed);
  }

  eot::write_run_artifacts(result, cfg, out_dir);
  const auto stats = result.algorithm_stats();
  for (const auto& [name, s] : stats) {
    std::cout << name << ": mean " << s.mean << "  median " << s.median << "  variance "
              << s.variance << "  samples " << s.samples << "\n";
  }
  std::cout << "tracking pos rmse: " << result.pos_rmse() << " m over "
            << result.track_pos.size() << " samples\n";
  std::cout << "report written to " << out_dir << "\n";

  const double ratio = result.total_clusters > 0
                           ? static_cast<double>(result.degenerate_clusters) /
                                 static_cast<double>(result.total_clusters)
                           : 0.0;
  if (ratio > cfg.run.max_degenerate_ratio) {
    std::cerr << "degenerate cluster ratio " << ratio << " exceeds threshold "
              << cfg.run.max_degenerate_ratio << "\n";
    return kExitDegenerate;
  }
  return kExitOk;
}

int cmd_bench(const std::string& config_path, std::uint64_t seed, const std::string& objects_arg,
              double duration, const std::string& out_path) {
  eot::AppConfig cfg = load_app_config(config_path);

  std::vector<int> counts;
  std::stringstream ss(objects_arg);
  std::string tok;
  while (std::getline(ss, tok, ',')) counts.push_back(std::stoi(tok));
  if (counts.empty()) counts = {5, 10, 15, 20, 25, 30};

  const auto rows = eot::bench_sweep(counts, cfg, seed, duration);
  const std::string csv = eot::bench_csv(rows);
  std::cout << csv;
  if (!out_path.empty()) {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open output file " + out_path);
    os << csv;
  }
  return kExitOk;
}

int cmd_stats(const std::string& report_path, const std::string& csv_path) {
  std::ifstream in(report_path);
  if (!in) throw std::runtime_error("cannot open report " + report_path);
  nlohmann::json report;
  try {
    report = nlohmann::json::parse(in);
  } catch (const std::exception& e) {
    throw std::runtime_error("report parse error: " + std::string(e.what()));
  }

  std::ostringstream os;
  os << "algorithm,mean,median,variance,samples\n";
  for (const auto& [name, s] : report.at("algorithms").items()) {
    os << name << ',' << s.at("mean").get<double>() << ',' << s.at("median").get<double>() << ','
       << s.at("variance").get<double>() << ',' << s.at("samples").get<long>() << '\n';
  }
  std::cout << os.str();
  if (!csv_path.empty()) {
    std::ofstream file(csv_path);
    if (!file) throw std::runtime_error("cannot open output file " + csv_path);
    file << os.str();
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Radar extended-object tracking: simulate, run, bench, stats"};
  app.require_subcommand(1);

  std::string scenario = "b";
  std::string config_path;
  std::string frames_path;
  std::string out_path;
  std::uint64_t seed = 42;
  bool no_truth = false;
  std::string objects = "5,10,15,20,25,30";
  double bench_duration = 7.5;
  std::string report_path;

  auto* sim = app.add_subcommand("simulate", "Generate a frame record stream for a scenario");
  sim->add_option("--scenario", scenario, "Builtin name (a|b|c|circle) or scenario file");
  sim->add_option("--config", config_path, "Config file (JSON)");
  sim->add_option("--seed", seed, "RNG seed");
  sim->add_option("--out", out_path, "Output file ('-' for stdout)");
  sim->add_flag("--no-truth", no_truth, "Omit ground-truth records");

  auto* run = app.add_subcommand("run", "Run the tracking pipeline and write a report");
  run->add_option("--scenario", scenario, "Builtin name or scenario file");
  run->add_option("--frames", frames_path, "Pre-recorded frame stream instead of simulating");
  run->add_option("--config", config_path, "Config file (JSON)");
  run->add_option("--seed", seed, "RNG seed");
  run->add_option("--out", out_path, "Output directory")->required();

  auto* bench = app.add_subcommand("bench", "Per-frame latency sweep over object counts");
  bench->add_option("--config", config_path, "Config file (JSON)");
  bench->add_option("--seed", seed, "RNG seed");
  bench->add_option("--objects", objects, "Comma-separated object counts");
  bench->add_option("--duration", bench_duration, "Seconds of simulated traffic per count");
  bench->add_option("--out", out_path, "CSV output file");

  auto* stats = app.add_subcommand("stats", "Flatten a report into a stats table");
  stats->add_option("--report", report_path, "report.json from a run")->required();
  stats->add_option("--csv", out_path, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (sim->parsed()) return cmd_simulate(scenario, config_path, seed, out_path, !no_truth);
    if (run->parsed()) return cmd_run(scenario, frames_path, config_path, seed, out_path);
    if (bench->parsed()) return cmd_bench(config_path, seed, objects, bench_duration, out_path);
    if (stats->parsed()) return cmd_stats(report_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}
