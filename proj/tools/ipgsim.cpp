#include "ipg/bench.hpp"
#include "ipg/io.hpp"
#include "ipg/render.hpp"
#include "ipg/scenarios.hpp"
#include "ipg/sim.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

int threads_from_env() {
  const char* raw = std::getenv("IPG_THREADS");
  if (raw == nullptr || *raw == '\0') return 0;
  try {
    return std::max(0, std::stoi(raw));
  } catch (const std::exception&) {
    std::cerr << "warning: ignoring unparsable IPG_THREADS value\n";
    return 0;
  }
}

std::vector<ipg::PolicyKind> parse_assignment(const std::string& arg, int n_agents) {
  std::vector<ipg::PolicyKind> kinds;
  std::stringstream ss(arg);
  std::string token;
  while (std::getline(ss, token, ',')) {
    ipg::PolicyKind kind;
    if (!ipg::parse_policy(token, kind)) {
      throw CLI::ValidationError("--policy", "unknown policy '" + token +
                                                 "' (expected ipg, vanilla, brake, ignore, or "
                                                 "centralized)");
    }
    kinds.push_back(kind);
  }
  if (kinds.size() == 1) kinds.assign(static_cast<size_t>(n_agents), kinds[0]);
  if (static_cast<int>(kinds.size()) != n_agents) {
    throw CLI::ValidationError("--policy", "expected 1 or " + std::to_string(n_agents) +
                                               " comma-separated policies");
  }
  return kinds;
}

struct ConfigFlags {
  std::optional<double> ts;
  std::optional<int> max_steps;
  std::optional<double> goal_tolerance;
  std::optional<double> contact_radius;
  std::optional<int> horizon;
  std::optional<int> max_iterations;
  std::optional<std::uint64_t> seed;

  void add_to(CLI::App* cmd) {
    cmd->add_option("--ts", ts, "sampling time (s)");
    cmd->add_option("--max-steps", max_steps, "simulation step limit");
    cmd->add_option("--goal-tolerance", goal_tolerance, "arrival distance (m)");
    cmd->add_option("--contact-radius", contact_radius, "physical collision threshold (m)");
    cmd->add_option("--horizon", horizon, "planning horizon (steps)");
    cmd->add_option("--max-iterations", max_iterations, "solver iteration limit");
    cmd->add_option("--seed", seed, "random seed");
  }

  void apply(ipg::SimConfig& cfg) const {
    if (ts) cfg.ts = *ts;
    if (max_steps) cfg.max_steps = *max_steps;
    if (goal_tolerance) cfg.goal_tolerance = *goal_tolerance;
    if (contact_radius) cfg.contact_radius = *contact_radius;
    if (horizon) cfg.solver.horizon = *horizon;
    if (max_iterations) cfg.solver.max_iterations = *max_iterations;
    if (seed) cfg.seed = *seed;
  }
};

void render_frames(const fs::path& trace_dir, const fs::path& out_dir, int every) {
  const ipg::Scenario scenario = ipg::load_scenario(trace_dir / "scenario.json");
  const ipg::ParsedTrace parsed = ipg::trace_from_csv(ipg::read_file(trace_dir / "trace.csv"));
  const auto decisions = ipg::plans_from_jsonl(ipg::read_file(trace_dir / "plans.jsonl"));
  if (parsed.states.empty()) throw std::runtime_error("trace is empty");

  fs::create_directories(out_dir);
  const int steps = static_cast<int>(parsed.states.size()) - 1;
  for (int s = 0; s <= steps; s += every) {
    std::vector<ipg::JointState> history(parsed.states.begin(),
                                         parsed.states.begin() + s + 1);
    static const std::vector<ipg::AgentDecision> kNoDecisions;
    const auto& frame_decisions =
        s < static_cast<int>(decisions.size()) ? decisions[static_cast<size_t>(s)] : kNoDecisions;
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%06d.svg", s);
    ipg::write_file(out_dir / name,
                    ipg::render_frame_svg(scenario, history, frame_decisions));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed multi-agent interaction simulator"};
  app.require_subcommand(1);

  // run
  auto* run_cmd = app.add_subcommand("run", "execute one closed-loop run");
  std::string scenario_path;
  std::string policy_arg = "ipg";
  std::string run_out = "out";
  bool svg = false;
  int svg_every = 25;
  ConfigFlags run_flags;
  run_cmd->add_option("scenario", scenario_path, "scenario JSON file")->required();
  run_cmd->add_option("--policy", policy_arg, "per-agent policies, comma separated");
  run_cmd->add_option("--out", run_out, "output directory");
  run_cmd->add_flag("--svg", svg, "render SVG frames");
  run_cmd->add_option("--every", svg_every, "frame sampling stride");
  run_flags.add_to(run_cmd);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a randomized benchmark suite");
  std::string suite_name = "narrow_way";
  int n_cases = 20;
  std::uint64_t bench_seed = 1;
  std::string bench_out = "bench_out";
  int jobs = 0;
  ConfigFlags bench_flags;
  bench_cmd->add_option("--suite", suite_name, "suite name (narrow_way)");
  bench_cmd->add_option("--cases", n_cases, "number of cases");
  bench_cmd->add_option("--seed", bench_seed, "suite generation seed");
  bench_cmd->add_option("--out", bench_out, "output directory");
  bench_cmd->add_option("--jobs", jobs, "concurrent cases (0 = sequential)");
  bench_flags.add_to(bench_cmd);

  // render
  auto* render_cmd = app.add_subcommand("render", "render SVG frames from a recorded run");
  std::string trace_dir;
  std::string render_out;
  int every = 25;
  render_cmd->add_option("trace_dir", trace_dir, "directory holding a recorded run")->required();
  render_cmd->add_option("--every", every, "frame sampling stride");
  render_cmd->add_option("--out", render_out, "output directory (default <trace_dir>/frames)");

  // make
  auto* make_cmd = app.add_subcommand("make", "write a built-in scenario to JSON");
  std::string make_name = "narrow_way";
  std::string make_out = "scenario.json";
  make_cmd->add_option("name", make_name, "narrow_way | t_intersection | open_area");
  make_cmd->add_option("--out", make_out, "output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) {
      const std::string text = ipg::read_file(scenario_path);
      const ipg::Scenario scenario = ipg::scenario_from_json(text);
      ipg::validate(scenario);

      ipg::SimConfig cfg = ipg::sim_config_from_json(text, ipg::SimConfig{});
      run_flags.apply(cfg);
      cfg.threads = threads_from_env();

      const auto assignment = parse_assignment(policy_arg, scenario.agent_count());
      const ipg::SimTrace trace = ipg::run(scenario, assignment, cfg);
      ipg::write_run_outputs(run_out, scenario, assignment, cfg, trace);
      if (svg) render_frames(run_out, fs::path(run_out) / "frames", svg_every);

      std::cout << "outcome: " << ipg::outcome_name(trace.outcome.kind)
                << "  steps: " << trace.steps()
                << "  total_time_s: " << trace.outcome.total_time_s << "\n";
      return 0;
    }

    if (*bench_cmd) {
      if (suite_name != "narrow_way") {
        std::cerr << "unknown suite '" << suite_name << "' (supported: narrow_way)\n";
        return 2;
      }
      ipg::SimConfig cfg;
      bench_flags.apply(cfg);
      cfg.seed = bench_seed;
      cfg.threads = threads_from_env();

      const auto suite = ipg::random_narrow_way_suite(n_cases, bench_seed);
      const std::vector<ipg::Assignment> assignments = {
          {"ipg", {ipg::PolicyKind::IPG}},
          {"vanilla", {ipg::PolicyKind::Vanilla}},
          {"brake", {ipg::PolicyKind::Brake}},
      };
      const ipg::SuiteReport report = ipg::run_suite(suite, assignments, cfg, jobs);
      ipg::write_suite_outputs(bench_out, report);
      std::cout << ipg::report_table(report);
      return 0;
    }

    if (*render_cmd) {
      if (every < 1) {
        std::cerr << "--every must be >= 1\n";
        return 2;
      }
      const fs::path out =
          render_out.empty() ? fs::path(trace_dir) / "frames" : fs::path(render_out);
      render_frames(trace_dir, out, every);
      return 0;
    }

    if (*make_cmd) {
      ipg::Scenario scenario;
      if (make_name == "narrow_way") {
        scenario = ipg::make_narrow_way_scenario();
      } else if (make_name == "t_intersection") {
        scenario = ipg::make_t_intersection_scenario();
      } else if (make_name == "open_area") {
        scenario = ipg::make_open_area(3, {1.2, 1.5, 2.0});
      } else {
        std::cerr << "unknown scenario '" << make_name
                  << "' (supported: narrow_way, t_intersection, open_area)\n";
        return 2;
      }
      ipg::save_scenario(scenario, make_out);
      std::cout << "wrote " << make_out << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
