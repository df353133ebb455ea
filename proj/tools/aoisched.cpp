// Command-line driver: sweeps, single runs, policy audits and sampled
// deployments, all from a key = value configuration file.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "aoisched/experiment.hpp"

namespace fs = std::filesystem;
using namespace aoisched;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitRuntime = 3;

struct Options {
  std::string config_path;
  std::string out_dir = ".";
  std::int64_t seed = -1;
  unsigned threads = 1;
  std::string mode;
  std::string policy;
};

ExperimentSpec load(const Options& o, bool require_sweep) {
  std::ifstream in(o.config_path);
  if (!in) throw ConfigError(0, "cannot open config file '" + o.config_path + "'");
  std::stringstream text;
  text << in.rdbuf();
  ExperimentSpec spec = parse_config(text.str(), require_sweep);
  if (o.seed >= 0) spec.base.master_seed = static_cast<std::uint64_t>(o.seed);
  if (o.mode == "actual") spec.base.mode = SystemMode::Actual;
  if (o.mode == "dominant") spec.base.mode = SystemMode::Dominant;
  if (!o.policy.empty()) {
    try {
      spec.policies = {parse_policy(o.policy)};
    } catch (const std::invalid_argument& e) {
      throw ConfigError(0, e.what());
    }
  }
  return spec;
}

std::ofstream open_output(const Options& o, const std::string& name) {
  fs::create_directories(o.out_dir);
  const fs::path path = fs::path(o.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  return out;
}

void write_json(const Options& o, const std::string& name, const nlohmann::json& j) {
  auto out = open_output(o, name);
  out << j.dump(2) << '\n';
  if (!out) throw std::runtime_error("failed writing " + name);
}

NetworkRealization first_realization(const SimConfig& c) {
  return sample_bipolar(c.density, c.channel.link_distance, c.region, realization_seed(c.master_seed, 0));
}

int cmd_sweep(const Options& o) {
  const ExperimentSpec spec = load(o, true);
  const auto start = std::chrono::steady_clock::now();
  auto csv = open_output(o, spec.output_path.empty() ? "sweep.csv" : spec.output_path);
  const auto rows = run_sweep(spec, o.threads, &csv);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(o, "provenance.json", provenance_json(spec, elapsed));
  std::cerr << rows.size() << " rows in " << elapsed << " s\n";
  return 0;
}

int cmd_run(const Options& o) {
  const ExperimentSpec spec = load(o, false);
  SimConfig c = spec.base;
  c.spec = spec.policies.front();
  const SimResult result = run_experiment(c, o.threads);
  auto links = open_output(o, "links.csv");
  write_link_csv(links, result);
  write_json(o, "summary.json", summary_json(c, result));
  std::cout << policy_label(c.spec) << " network peak AoI " << result.network_peak_aoi << " [" << result.ci_low
            << ", " << result.ci_high << "], stable fraction " << result.fraction_stable << '\n';
  return 0;
}

int cmd_policy_report(const Options& o) {
  const ExperimentSpec spec = load(o, false);
  const NetworkRealization net = first_realization(spec.base);
  auto out = open_output(o, "policy_report.csv");
  write_policy_report(out, policy_report(net, spec.policies.front(), spec.base.channel));
  return 0;
}

int cmd_sample(const Options& o) {
  const ExperimentSpec spec = load(o, false);
  auto out = open_output(o, "realization.txt");
  write_realization(out, first_realization(spec.base));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Slotted ALOHA age-of-information simulator with locally adaptive access"};
  app.require_subcommand(1);
  Options o;

  auto add_common = [&o](CLI::App* sub) {
    sub->add_option("-c,--config", o.config_path, "configuration file")->required()->check(CLI::ExistingFile);
    sub->add_option("-o,--out", o.out_dir, "output directory");
    sub->add_option("--seed", o.seed, "override the master seed")->check(CLI::NonNegativeNumber);
    sub->add_option("-j,--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
    sub->add_option("--mode", o.mode, "actual or dominant")->check(CLI::IsMember({"actual", "dominant"}));
    sub->add_option("--policy", o.policy, "empty, nearest or disk:<radius>; replaces the configured policies");
  };
  auto* sweep = app.add_subcommand("sweep", "run every sweep point and policy; writes sweep.csv and provenance.json");
  auto* run = app.add_subcommand("run", "simulate the base configuration; writes links.csv and summary.json");
  auto* report = app.add_subcommand("policy-report", "per-node access decisions on the first sampled network");
  auto* sample = app.add_subcommand("sample", "write the first sampled network");
  for (auto* sub : {sweep, run, report, sample}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (sweep->parsed()) return cmd_sweep(o);
    if (run->parsed()) return cmd_run(o);
    if (report->parsed()) return cmd_policy_report(o);
    return cmd_sample(o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
}
