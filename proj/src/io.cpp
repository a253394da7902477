#include "ipg/io.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

namespace ipg {

using nlohmann::json;

std::string format_double(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{}) throw std::invalid_argument("bad number: " + text);
  return value;
}

namespace {

json vec2_json(const Eigen::Vector2d& v) { return json::array({v.x(), v.y()}); }
Eigen::Vector2d vec2_from(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

json interval_json(const Interval& b) { return json::array({b.lo, b.hi}); }
Interval interval_from(const json& j) {
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

json obstacle_json(const Obstacle& o) {
  json j;
  if (o.kind == Obstacle::Kind::Circle) {
    j["kind"] = "circle";
    j["center"] = vec2_json(o.center);
    j["radius"] = o.radius;
  } else {
    j["kind"] = "rect";
    j["min"] = vec2_json(o.rect_min);
    j["max"] = vec2_json(o.rect_max);
  }
  j["margin"] = o.margin;
  return j;
}

Obstacle obstacle_from(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const double margin = j.value("margin", 0.3);
  if (kind == "circle") {
    return Obstacle::circle(vec2_from(j.at("center")), j.at("radius").get<double>(), margin);
  }
  if (kind == "rect") {
    return Obstacle::rect(vec2_from(j.at("min")), vec2_from(j.at("max")), margin);
  }
  throw std::invalid_argument("unknown obstacle kind: " + kind);
}

json agent_json(const AgentState& x, const AgentParams& p) {
  json j;
  j["state"] = json::array({x.px, x.py, x.theta, x.v});
  j["goal"] = vec2_json(p.goal);
  j["goal_heading"] = p.goal_heading;
  j["goal_speed"] = p.goal_speed;
  j["state_weight"] =
      json::array({p.state_weight[0], p.state_weight[1], p.state_weight[2], p.state_weight[3]});
  j["input_weight"] = json::array({p.input_weight[0], p.input_weight[1]});
  j["safety_weight"] = p.safety_weight;
  j["backup_weight"] = p.backup_weight;
  j["safety_radius"] = p.safety_radius;
  j["sensing_range"] = p.sensing_range;
  j["accel_bounds"] = interval_json(p.u_bounds.accel);
  j["omega_bounds"] = interval_json(p.u_bounds.omega);
  j["v_bounds"] = interval_json(p.v_bounds);
  return j;
}

void agent_from(const json& j, AgentState& x, AgentParams& p) {
  const auto& s = j.at("state");
  x = {s.at(0).get<double>(), s.at(1).get<double>(), s.at(2).get<double>(),
       s.at(3).get<double>()};
  p.goal = vec2_from(j.at("goal"));
  p.goal_heading = j.value("goal_heading", 0.0);
  p.goal_speed = j.value("goal_speed", 0.0);
  if (j.contains("state_weight")) {
    const auto& q = j.at("state_weight");
    p.state_weight = {q.at(0).get<double>(), q.at(1).get<double>(), q.at(2).get<double>(),
                      q.at(3).get<double>()};
  }
  if (j.contains("input_weight")) {
    const auto& r = j.at("input_weight");
    p.input_weight = {r.at(0).get<double>(), r.at(1).get<double>()};
  }
  p.safety_weight = j.value("safety_weight", p.safety_weight);
  p.backup_weight = j.value("backup_weight", p.backup_weight);
  p.safety_radius = j.value("safety_radius", p.safety_radius);
  p.sensing_range = j.value("sensing_range", p.sensing_range);
  if (j.contains("accel_bounds")) p.u_bounds.accel = interval_from(j.at("accel_bounds"));
  if (j.contains("omega_bounds")) p.u_bounds.omega = interval_from(j.at("omega_bounds"));
  if (j.contains("v_bounds")) p.v_bounds = interval_from(j.at("v_bounds"));
}

json state_json(const AgentState& x) { return json::array({x.px, x.py, x.theta, x.v}); }

}  // namespace

std::string scenario_to_json(const Scenario& scenario) {
  json j;
  j["name"] = scenario.name;
  j["workspace"] = {{"min", vec2_json(scenario.workspace.min)},
                    {"max", vec2_json(scenario.workspace.max)}};
  j["obstacles"] = json::array();
  for (const auto& o : scenario.obstacles) j["obstacles"].push_back(obstacle_json(o));
  j["agents"] = json::array();
  for (size_t i = 0; i < scenario.params.size(); ++i) {
    j["agents"].push_back(agent_json(scenario.initial_states[i], scenario.params[i]));
  }
  if (!scenario.sampling_ranges.empty()) {
    json ranges;
    for (const auto& [key, range] : scenario.sampling_ranges) {
      ranges[key] = json::array({range.first, range.second});
    }
    j["sampling_ranges"] = ranges;
  }
  return j.dump(2) + "\n";
}

Scenario scenario_from_json(const std::string& text) {
  const json j = json::parse(text);
  Scenario s;
  s.name = j.value("name", "scenario");
  s.workspace.min = vec2_from(j.at("workspace").at("min"));
  s.workspace.max = vec2_from(j.at("workspace").at("max"));
  for (const auto& jo : j.value("obstacles", json::array())) {
    s.obstacles.push_back(obstacle_from(jo));
  }
  for (const auto& ja : j.at("agents")) {
    AgentState x;
    AgentParams p;
    agent_from(ja, x, p);
    s.initial_states.push_back(x);
    s.params.push_back(p);
  }
  if (j.contains("sampling_ranges")) {
    for (const auto& [key, range] : j.at("sampling_ranges").items()) {
      s.sampling_ranges[key] = {range.at(0).get<double>(), range.at(1).get<double>()};
    }
  }
  return s;
}

SimConfig sim_config_from_json(const std::string& text, SimConfig base) {
  const json j = json::parse(text);
  if (j.contains("sim")) {
    const json& s = j.at("sim");
    base.ts = s.value("ts", base.ts);
    base.max_steps = s.value("max_steps", base.max_steps);
    base.goal_tolerance = s.value("goal_tolerance", base.goal_tolerance);
    base.arrival_speed = s.value("arrival_speed", base.arrival_speed);
    base.contact_radius = s.value("contact_radius", base.contact_radius);
    base.seed = s.value("seed", base.seed);
    base.obstacle_weight = s.value("obstacle_weight", base.obstacle_weight);
    base.box_weight = s.value("box_weight", base.box_weight);
  }
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    base.solver.max_iterations = s.value("max_iterations", base.solver.max_iterations);
    base.solver.tolerance = s.value("tolerance", base.solver.tolerance);
    base.solver.reg_init = s.value("reg_init", base.solver.reg_init);
    base.solver.reg_growth = s.value("reg_growth", base.solver.reg_growth);
    base.solver.reg_shrink = s.value("reg_shrink", base.solver.reg_shrink);
    base.solver.reg_max = s.value("reg_max", base.solver.reg_max);
    base.solver.horizon = s.value("horizon", base.solver.horizon);
    if (s.contains("line_search_steps")) {
      base.solver.line_search_steps = s.at("line_search_steps").get<std::vector<double>>();
    }
  }
  return base;
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path) {
  write_file(path, scenario_to_json(scenario));
}

Scenario load_scenario(const std::filesystem::path& path) {
  return scenario_from_json(read_file(path));
}

std::string trace_to_csv(const SimTrace& trace, double ts) {
  const int n = trace.states.empty() ? 0 : static_cast<int>(trace.states[0].size());
  std::ostringstream out;
  out << "step,t";
  for (int i = 0; i < n; ++i) {
    out << ",px_" << i << ",py_" << i << ",theta_" << i << ",v_" << i << ",a_" << i << ",w_" << i;
  }
  out << '\n';
  for (size_t k = 0; k < trace.states.size(); ++k) {
    out << k << ',' << format_double(static_cast<double>(k) * ts);
    for (int i = 0; i < n; ++i) {
      const AgentState& x = trace.states[k][static_cast<size_t>(i)];
      const ControlInput u =
          k < trace.controls.size() ? trace.controls[k][static_cast<size_t>(i)] : ControlInput{};
      out << ',' << format_double(x.px) << ',' << format_double(x.py) << ','
          << format_double(x.theta) << ',' << format_double(x.v) << ',' << format_double(u.a)
          << ',' << format_double(u.w);
    }
    out << '\n';
  }
  return out.str();
}

ParsedTrace trace_from_csv(const std::string& text) {
  ParsedTrace parsed;
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) throw std::invalid_argument("empty trace file");

  int n = 0;
  {
    size_t commas = 0;
    for (char c : line) commas += (c == ',');
    if (commas < 7 || (commas - 1) % 6 != 0) throw std::invalid_argument("bad trace header");
    n = static_cast<int>((commas - 1) / 6);
  }

  std::vector<std::vector<ControlInput>> controls;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    if (static_cast<int>(fields.size()) != 2 + 6 * n) {
      throw std::invalid_argument("bad trace row: " + line);
    }
    JointState state(static_cast<size_t>(n));
    std::vector<ControlInput> us(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) {
      const size_t base = 2 + 6 * static_cast<size_t>(i);
      state[static_cast<size_t>(i)] = {parse_double(fields[base]), parse_double(fields[base + 1]),
                                       parse_double(fields[base + 2]),
                                       parse_double(fields[base + 3])};
      us[static_cast<size_t>(i)] = {parse_double(fields[base + 4]),
                                    parse_double(fields[base + 5])};
    }
    parsed.states.push_back(std::move(state));
    controls.push_back(std::move(us));
  }
  if (parsed.states.empty()) throw std::invalid_argument("trace has no rows");
  controls.pop_back();  // final row carries placeholder controls
  parsed.controls = std::move(controls);
  return parsed;
}

std::string plans_to_jsonl(const SimTrace& trace, double ts) {
  std::ostringstream out;
  for (size_t k = 0; k < trace.decisions.size(); ++k) {
    for (size_t i = 0; i < trace.decisions[k].size(); ++i) {
      const AgentDecision& d = trace.decisions[k][i];
      json j;
      j["step"] = k;
      j["t"] = static_cast<double>(k) * ts;
      j["ego"] = i;
      j["control"] = json::array({d.control.a, d.control.w});
      j["feasible"] = d.feasible;
      j["converged"] = d.converged;
      j["plan_cost"] = d.plan_cost;
      j["plan"] = json::array();
      for (const auto& pa : d.plan) {
        json jp;
        jp["id"] = pa.id;
        jp["states"] = json::array();
        for (const auto& x : pa.states) jp["states"].push_back(state_json(x));
        j["plan"].push_back(std::move(jp));
      }
      out << j.dump() << '\n';
    }
  }
  return out.str();
}

std::vector<std::vector<AgentDecision>> plans_from_jsonl(const std::string& text) {
  std::vector<std::vector<AgentDecision>> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const json j = json::parse(line);
    const size_t step = j.at("step").get<size_t>();
    const size_t ego = j.at("ego").get<size_t>();
    if (out.size() <= step) out.resize(step + 1);
    if (out[step].size() <= ego) out[step].resize(ego + 1);

    AgentDecision d;
    d.control = {j.at("control").at(0).get<double>(), j.at("control").at(1).get<double>()};
    d.feasible = j.at("feasible").get<bool>();
    d.converged = j.at("converged").get<bool>();
    d.plan_cost = j.value("plan_cost", 0.0);
    for (const auto& jp : j.at("plan")) {
      PlannedAgent pa;
      pa.id = jp.at("id").get<int>();
      for (const auto& js : jp.at("states")) {
        pa.states.push_back({js.at(0).get<double>(), js.at(1).get<double>(),
                             js.at(2).get<double>(), js.at(3).get<double>()});
      }
      d.plan.push_back(std::move(pa));
    }
    out[step][ego] = std::move(d);
  }
  return out;
}

SimTrace load_run(const std::filesystem::path& dir, const Scenario& scenario,
                  const SimConfig& cfg) {
  SimTrace trace;
  ParsedTrace parsed = trace_from_csv(read_file(dir / "trace.csv"));
  trace.states = std::move(parsed.states);
  trace.controls = std::move(parsed.controls);
  trace.decisions = plans_from_jsonl(read_file(dir / "plans.jsonl"));
  trace.outcome = classify(trace, scenario, cfg);

  trace.arrival_step.assign(trace.states[0].size(), -1);
  for (size_t i = 0; i < trace.arrival_step.size(); ++i) {
    const double t = trace.outcome.arrival_time_s[i];
    trace.arrival_step[i] = t < 0 ? -1 : static_cast<int>(std::lround(t / cfg.ts));
  }
  if (trace.outcome.kind == OutcomeKind::Collision) {
    trace.first_collision_step = static_cast<int>(std::lround(trace.outcome.total_time_s / cfg.ts));
  }
  return trace;
}

std::string summary_to_json(const SimTrace& trace, const Scenario& scenario,
                            const std::vector<PolicyKind>& assignment, const SimConfig& cfg) {
  json j;
  j["scenario"] = scenario.name;
  j["outcome"] = outcome_name(trace.outcome.kind);
  j["steps"] = trace.steps();
  j["total_time_s"] = trace.outcome.total_time_s;
  j["arrival_times_s"] = trace.outcome.arrival_time_s;
  if (trace.first_collision_step >= 0) {
    j["first_collision_step"] = trace.first_collision_step;
  } else {
    j["first_collision_step"] = nullptr;
  }
  j["policies"] = json::array();
  for (const auto kind : assignment) j["policies"].push_back(policy_name(kind));

  // Effective configuration; decision threading is scheduling only and by
  // contract cannot change results, so it is not part of the echo.
  json c;
  c["ts"] = cfg.ts;
  c["max_steps"] = cfg.max_steps;
  c["goal_tolerance"] = cfg.goal_tolerance;
  c["arrival_speed"] = cfg.arrival_speed;
  c["contact_radius"] = cfg.contact_radius;
  c["seed"] = cfg.seed;
  c["obstacle_weight"] = cfg.obstacle_weight;
  c["box_weight"] = cfg.box_weight;
  json sc;
  sc["max_iterations"] = cfg.solver.max_iterations;
  sc["tolerance"] = cfg.solver.tolerance;
  sc["reg_init"] = cfg.solver.reg_init;
  sc["reg_growth"] = cfg.solver.reg_growth;
  sc["reg_shrink"] = cfg.solver.reg_shrink;
  sc["reg_max"] = cfg.solver.reg_max;
  sc["line_search_steps"] = cfg.solver.line_search_steps;
  sc["horizon"] = cfg.solver.horizon;
  c["solver"] = sc;
  j["config"] = c;
  return j.dump(2) + "\n";
}

void write_run_outputs(const std::filesystem::path& dir, const Scenario& scenario,
                       const std::vector<PolicyKind>& assignment, const SimConfig& cfg,
                       const SimTrace& trace) {
  std::filesystem::create_directories(dir);
  write_file(dir / "trace.csv", trace_to_csv(trace, cfg.ts));
  write_file(dir / "plans.jsonl", plans_to_jsonl(trace, cfg.ts));
  write_file(dir / "summary.json", summary_to_json(trace, scenario, assignment, cfg));
  save_scenario(scenario, dir / "scenario.json");
}

void write_suite_outputs(const std::filesystem::path& dir, const SuiteReport& report) {
  std::filesystem::create_directories(dir);
  write_file(dir / "report.txt", report_table(report));
  write_file(dir / "report_rows.jsonl", report_rows_jsonl(report));
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

}  // namespace ipg
