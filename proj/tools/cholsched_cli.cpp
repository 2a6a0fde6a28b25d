// Command-line front end: DAG export, ALAP profile tables, lower-bound
// curves, schedule simulation and speedup sweeps.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cholsched/alap_profile.hpp"
#include "cholsched/critical_path.hpp"
#include "cholsched/export.hpp"
#include "cholsched/lower_bounds.hpp"
#include "cholsched/simulator.hpp"
#include "cholsched/task_graph.hpp"

namespace {

using namespace cholsched;

Policy parse_policy(const std::string& name) {
  if (name == "alap") return Policy::AlapList;
  if (name == "asap") return Policy::AsapList;
  if (name == "forkjoin") return Policy::ForkJoin;
  if (name == "kurzak") return Policy::KurzakRows;
  throw CLI::ValidationError("--policy", "unknown policy '" + name + "'");
}

FormulaMode parse_mode(const std::string& name) {
  if (name == "paper") return FormulaMode::PaperLiteral;
  if (name == "corrected") return FormulaMode::Corrected;
  throw CLI::ValidationError("--mode", "unknown mode '" + name + "'");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open output file: " + path);
  return os;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scheduling analysis of the tiled Cholesky factorization task graph"};
  app.require_subcommand(1);

  int t = 2;
  std::int64_t p = 1, p_min = 1, p_max = 0, p_step = 1;
  std::string out, format, mode_name = "corrected", policy_name_arg = "alap";
  std::vector<std::string> policy_names;

  auto* dag = app.add_subcommand("dag", "Export the task dependency graph");
  dag->add_option("--t", t, "tile count")->required();
  dag->add_option("--out", out, "output path")->required();
  dag->add_option("--format", format, "dot|json");

  auto* profile = app.add_subcommand("profile", "ALAP concurrency profile and zone bounds");
  profile->add_option("--t", t, "tile count")->required();
  profile->add_option("--out", out, "output path")->required();
  profile->add_option("--format", format, "csv|svg");
  profile->add_option("--mode", mode_name, "paper|corrected")->default_val("corrected");

  auto* bounds = app.add_subcommand("bounds", "Makespan lower-bound curve over p");
  bounds->add_option("--t", t, "tile count")->required();
  bounds->add_option("--p-min", p_min, "smallest p")->default_val(1);
  bounds->add_option("--p-max", p_max, "largest p")->required();
  bounds->add_option("--p-step", p_step, "p stride")->default_val(1);
  bounds->add_option("--out", out, "output path")->required();

  auto* simulate_cmd = app.add_subcommand("simulate", "Simulate one schedule");
  simulate_cmd->add_option("--t", t, "tile count")->required();
  simulate_cmd->add_option("--p", p, "processing units")->required();
  simulate_cmd->add_option("--policy", policy_name_arg, "alap|asap|forkjoin|kurzak")
      ->default_val("alap");
  simulate_cmd->add_option("--out", out, "output path")->required();
  simulate_cmd->add_option("--format", format, "csv|svg");

  auto* speedup = app.add_subcommand("speedup", "Speedup sweep over a p range");
  speedup->add_option("--t", t, "tile count")->required();
  speedup->add_option("--p-min", p_min, "smallest p")->default_val(1);
  speedup->add_option("--p-max", p_max, "largest p")->required();
  speedup->add_option("--p-step", p_step, "p stride")->default_val(1);
  speedup->add_option("--policy", policy_names, "policy, repeatable (default: all)");
  speedup->add_option("--out", out, "output path")->required();
  speedup->add_option("--format", format, "csv|svg");

  CLI11_PARSE(app, argc, argv);

  // The format variable is shared between subcommands; apply the per-command
  // default here rather than through CLI11 (a shared target only keeps the
  // last default registered).
  if (format.empty()) format = dag->parsed() ? "dot" : "csv";

  try {
    if (dag->parsed()) {
      const TaskGraph g = build_graph(t);
      auto os = open_output(out);
      if (format == "dot")
        write_dot(g, os);
      else if (format == "json")
        write_graph_json(g, os);
      else
        throw std::runtime_error("dag format must be dot or json");
    } else if (profile->parsed()) {
      const FormulaMode mode = parse_mode(mode_name);
      auto os = open_output(out);
      if (format == "csv")
        write_profile_csv(t, mode, os);
      else if (format == "svg")
        write_profile_svg(t, mode, os);
      else
        throw std::runtime_error("profile format must be csv or svg");
    } else if (bounds->parsed()) {
      if (p_max < p_min) throw std::runtime_error("empty p range");
      auto os = open_output(out);
      write_bounds_csv(t, p_min, p_max, p_step, os);
    } else if (simulate_cmd->parsed()) {
      const Policy policy = parse_policy(policy_name_arg);
      const TaskGraph g = build_graph(t);
      const ScheduleTrace trace = simulate(g, p, policy);
      const ValidationReport report = validate(trace, g, p);
      {
        auto os = open_output(out);
        if (format == "csv")
          write_trace_csv(trace, os);
        else if (format == "svg")
          write_gantt_svg(trace, os);
        else
          throw std::runtime_error("simulate format must be csv or svg");
      }
      const Metrics m = metrics(trace);
      nlohmann::ordered_json j;
      j["t"] = t;
      j["p"] = p;
      j["policy"] = policy_name_arg;
      j["makespan"] = m.makespan;
      j["speedup"] = m.speedup;
      j["efficiency"] = m.efficiency;
      j["peak_concurrency"] = m.peak_concurrency;
      std::cout << j.dump() << "\n";
      if (!report.ok()) {
        for (const auto& v : report.violations)
          std::cerr << "trace violation: " << v.detail << "\n";
        return 1;
      }
    } else if (speedup->parsed()) {
      if (p_max < p_min) throw std::runtime_error("empty p range");
      std::vector<Policy> policies;
      if (policy_names.empty())
        policies = {Policy::AlapList, Policy::AsapList, Policy::ForkJoin, Policy::KurzakRows};
      else
        for (const auto& name : policy_names) policies.push_back(parse_policy(name));
      const auto rows = speedup_sweep(t, p_min, p_max, p_step, policies);
      auto os = open_output(out);
      if (format == "csv")
        write_speedup_csv(rows, os);
      else if (format == "svg")
        write_speedup_svg(rows, os);
      else
        throw std::runtime_error("speedup format must be csv or svg");
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}
