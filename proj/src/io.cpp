#include "roadplan/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace roadplan {

namespace {

using nlohmann::json;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

[[noreturn]] void fail_parse(const std::string& path, const std::string& why) {
  throw ParseError(path + ": " + why);
}

void expect_keys(const json& j, const std::string& path,
                 std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail_parse(path, "expected an object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed)
      if (item.key() == key) { known = true; break; }
    if (!known) fail_parse(path + "." + item.key(), "unknown key");
  }
}

bool has(const json& j, const char* key) { return j.contains(key); }

double get_double(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail_parse(path + "." + key, "missing required key");
  const json& v = j.at(key);
  if (!v.is_number()) fail_parse(path + "." + key, "expected a number");
  return v.get<double>();
}

int get_int(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail_parse(path + "." + key, "missing required key");
  const json& v = j.at(key);
  if (!v.is_number_integer()) fail_parse(path + "." + key, "expected an integer");
  return v.get<int>();
}

std::string get_string(const json& j, const std::string& path, const char* key) {
  if (!j.contains(key)) fail_parse(path + "." + key, "missing required key");
  const json& v = j.at(key);
  if (!v.is_string()) fail_parse(path + "." + key, "expected a string");
  return v.get<std::string>();
}

std::vector<double> get_double_array(const json& v, const std::string& path) {
  if (!v.is_array()) fail_parse(path, "expected an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!v[i].is_number())
      fail_parse(path + "[" + std::to_string(i) + "]", "expected a number");
    out.push_back(v[i].get<double>());
  }
  return out;
}

Road parse_road(const json& j, const std::string& path) {
  expect_keys(j, path,
              {"length_m", "length_km", "free_speed_mps", "free_speed_kmh",
               "vehicle_space_m", "headway_human_s", "headway_auto_s"});
  Road road;
  bool has_m = has(j, "length_m");
  bool has_km = has(j, "length_km");
  if (has_m == has_km)
    fail_parse(path, "exactly one of length_m | length_km required");
  road.length_m = has_m ? get_double(j, path, "length_m")
                        : get_double(j, path, "length_km") * 1000.0;
  bool has_mps = has(j, "free_speed_mps");
  bool has_kmh = has(j, "free_speed_kmh");
  if (has_mps == has_kmh)
    fail_parse(path, "exactly one of free_speed_mps | free_speed_kmh required");
  road.free_speed_mps = has_mps ? get_double(j, path, "free_speed_mps")
                                : get_double(j, path, "free_speed_kmh") / 3.6;
  road.vehicle_space_m = get_double(j, path, "vehicle_space_m");
  road.headway_human_s = get_double(j, path, "headway_human_s");
  road.headway_auto_s = get_double(j, path, "headway_auto_s");
  try {
    road.validate();
  } catch (const ValidationError& e) {
    throw ValidationError(path + "." + e.what());
  }
  return road;
}

PopulationModel parse_population(const json& j, const std::string& path) {
  std::string family = get_string(j, path, "family");
  if (family == "beta") {
    expect_keys(j, path, {"family", "alpha", "beta"});
    return PopulationModel::beta(get_double(j, path, "alpha"),
                                 get_double(j, path, "beta"));
  }
  if (family == "uniform") {
    expect_keys(j, path, {"family"});
    return PopulationModel::uniform();
  }
  if (family == "point_mass") {
    expect_keys(j, path, {"family", "theta"});
    return PopulationModel::point_mass(get_double(j, path, "theta"));
  }
  if (family == "empirical") {
    expect_keys(j, path, {"family", "samples"});
    if (!j.contains("samples")) fail_parse(path + ".samples", "missing required key");
    return PopulationModel::empirical(
        get_double_array(j.at("samples"), path + ".samples"));
  }
  fail_parse(path + ".family",
             "expected beta | uniform | point_mass | empirical");
}

ChoiceNoise parse_noise(const json& j, const std::string& path) {
  expect_keys(j, path, {"mode", "beta"});
  ChoiceNoise noise;
  std::string mode = get_string(j, path, "mode");
  if (mode == "deterministic") noise.mode = ChoiceMode::kDeterministic;
  else if (mode == "noisy") noise.mode = ChoiceMode::kNoisy;
  else fail_parse(path + ".mode", "expected deterministic | noisy");
  if (has(j, "beta")) noise.beta = get_double(j, path, "beta");
  return noise;
}

json population_to_json(const PopulationModel& model) {
  json j;
  if (model.is_beta()) {
    j["family"] = "beta";
    j["alpha"] = model.alpha();
    j["beta"] = model.beta_param();
  } else {
    j["family"] = "empirical";
    j["samples"] = model.samples();
  }
  return j;
}

PopulationModel population_from_json(const json& j, const std::string& path) {
  if (!j.is_object()) fail_parse(path, "expected an object");
  return parse_population(j, path);
}

json config_to_json(const ExperimentConfig& c) {
  json j;
  json roads = json::array();
  for (const Road& r : c.roads)
    roads.push_back({{"length_m", r.length_m},
                     {"free_speed_mps", r.free_speed_mps},
                     {"vehicle_space_m", r.vehicle_space_m},
                     {"headway_human_s", r.headway_human_s},
                     {"headway_auto_s", r.headway_auto_s}});
  j["network"] = {{"roads", roads}};
  j["demand"] = {{"human_vps", c.human_demand_vps},
                 {"auto_vps", c.auto_demand_vps}};
  j["planner"] = {{"profit_floor", c.profit_floor},
                  {"price_cap", c.price_cap},
                  {"latency_cap_s", c.latency_cap_s},
                  {"unserved_penalty_s", c.unserved_penalty_s},
                  {"latency_grid", c.latency_grid},
                  {"price_grid", c.price_grid}};
  j["population"] = population_to_json(c.truth);
  j["noise"] = {{"mode", c.noise.mode == ChoiceMode::kNoisy ? "noisy"
                                                            : "deterministic"},
                {"beta", c.noise.beta}};
  j["learning"] = {{"users", c.learn.users},
                   {"query_budget", c.learn.query_budget},
                   {"mh_steps", c.learn.mh_steps},
                   {"mh_burn_in", c.learn.mh_burn_in},
                   {"proposal_sd", c.learn.proposal_sd},
                   {"candidate_latency_points", c.learn.candidate_latency_points},
                   {"candidate_price_points", c.learn.candidate_price_points}};
  j["seed"] = c.seed;
  j["output_dir"] = c.output_dir;
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  expect_keys(j, "config",
              {"network", "demand", "planner", "population", "noise",
               "learning", "seed", "output_dir"});
  ExperimentConfig c;

  if (!j.contains("network")) fail_parse("config.network", "missing required key");
  const json& net = j.at("network");
  expect_keys(net, "network", {"roads"});
  if (!net.contains("roads") || !net.at("roads").is_array())
    fail_parse("network.roads", "expected an array");
  const json& roads = net.at("roads");
  for (std::size_t i = 0; i < roads.size(); ++i)
    c.roads.push_back(
        parse_road(roads[i], "network.roads[" + std::to_string(i) + "]"));

  if (!j.contains("demand")) fail_parse("config.demand", "missing required key");
  const json& demand = j.at("demand");
  expect_keys(demand, "demand", {"human_vps", "auto_vps"});
  c.human_demand_vps = get_double(demand, "demand", "human_vps");
  c.auto_demand_vps = get_double(demand, "demand", "auto_vps");

  if (!j.contains("planner")) fail_parse("config.planner", "missing required key");
  const json& planner = j.at("planner");
  expect_keys(planner, "planner",
              {"profit_floor", "price_cap", "latency_cap_s",
               "unserved_penalty_s", "latency_grid", "price_grid"});
  c.profit_floor = get_double(planner, "planner", "profit_floor");
  c.price_cap = get_double(planner, "planner", "price_cap");
  c.latency_cap_s = get_double(planner, "planner", "latency_cap_s");
  c.unserved_penalty_s = get_double(planner, "planner", "unserved_penalty_s");
  c.latency_grid = get_int(planner, "planner", "latency_grid");
  c.price_grid = get_int(planner, "planner", "price_grid");

  if (!j.contains("population"))
    fail_parse("config.population", "missing required key");
  c.truth = parse_population(j.at("population"), "population");

  if (has(j, "noise")) c.noise = parse_noise(j.at("noise"), "noise");

  if (has(j, "learning")) {
    const json& learn = j.at("learning");
    expect_keys(learn, "learning",
                {"users", "query_budget", "mh_steps", "mh_burn_in",
                 "proposal_sd", "candidate_latency_points",
                 "candidate_price_points"});
    if (has(learn, "users")) c.learn.users = get_int(learn, "learning", "users");
    if (has(learn, "query_budget"))
      c.learn.query_budget = get_int(learn, "learning", "query_budget");
    if (has(learn, "mh_steps"))
      c.learn.mh_steps = get_int(learn, "learning", "mh_steps");
    if (has(learn, "mh_burn_in"))
      c.learn.mh_burn_in = get_int(learn, "learning", "mh_burn_in");
    if (has(learn, "proposal_sd"))
      c.learn.proposal_sd = get_double(learn, "learning", "proposal_sd");
    if (has(learn, "candidate_latency_points"))
      c.learn.candidate_latency_points =
          get_int(learn, "learning", "candidate_latency_points");
    if (has(learn, "candidate_price_points"))
      c.learn.candidate_price_points =
          get_int(learn, "learning", "candidate_price_points");
  }

  if (has(j, "seed")) {
    const json& v = j.at("seed");
    if (v.is_number_unsigned())
      c.seed = v.get<std::uint64_t>();
    else if (v.is_number_integer() && v.get<long long>() >= 0)
      c.seed = static_cast<std::uint64_t>(v.get<long long>());
    else
      fail_parse("config.seed", "expected a non-negative integer");
  }
  if (has(j, "output_dir")) c.output_dir = get_string(j, "config", "output_dir");

  c.validate();
  return c;
}

json parse_text(const std::string& text, const std::string& what) {
  json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded()) throw ParseError(what + ": invalid JSON");
  return j;
}

// Common stamp so any result file names the config and seed it came from.
json stamped(const ExperimentConfig& config) {
  json j;
  j["version"] = kVersion;
  j["config_hash"] = config_hash(config);
  j["seed"] = config.seed;
  return j;
}

json loaded_payload(const std::string& path, const char* payload_key) {
  json j = parse_text(read_file(path), path);
  expect_keys(j, path, {"version", "config_hash", "seed", payload_key});
  std::string version = get_string(j, path, "version");
  if (version != kVersion)
    fail_parse(path + ".version", "unsupported version " + version);
  if (!j.contains(payload_key))
    fail_parse(path + "." + payload_key, "missing required key");
  return j.at(payload_key);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json plan_to_json(const Plan& plan) {
  return {{"latencies_s", plan.ell.latencies_s},
          {"prices", plan.prices},
          {"q", plan.q.q},
          {"human_vps", plan.flows.human_vps},
          {"auto_vps", plan.flows.auto_vps}};
}

Plan plan_from_json(const json& j, const std::string& path) {
  expect_keys(j, path, {"latencies_s", "prices", "q", "human_vps", "auto_vps"});
  for (const char* key : {"latencies_s", "prices", "q", "human_vps", "auto_vps"})
    if (!j.contains(key)) fail_parse(path + "." + key, "missing required key");
  Plan plan;
  plan.ell.latencies_s = get_double_array(j.at("latencies_s"), path + ".latencies_s");
  plan.prices = get_double_array(j.at("prices"), path + ".prices");
  plan.q.q = get_double_array(j.at("q"), path + ".q");
  plan.flows.human_vps = get_double_array(j.at("human_vps"), path + ".human_vps");
  plan.flows.auto_vps = get_double_array(j.at("auto_vps"), path + ".auto_vps");
  std::size_t n = plan.ell.latencies_s.size();
  if (plan.prices.size() != n || plan.q.q.size() != n ||
      plan.flows.human_vps.size() != n || plan.flows.auto_vps.size() != n)
    fail_parse(path, "plan arrays must share one length");
  return plan;
}

json evaluation_to_json(const PlanEvaluation& eval, bool proposition) {
  return {{"social_cost_s", eval.social_cost_s},
          {"profit", eval.profit},
          {"unserved_human_vps", eval.unserved_human_vps},
          {"feasible", eval.feasible},
          {"k", eval.k},
          {"proposition_holds", proposition}};
}

json simulation_to_json(const SimulationResult& r) {
  return {{"realized_q", r.realized_q.q},
          {"realized_human_vps", r.realized_flows.human_vps},
          {"realized_auto_vps", r.realized_flows.auto_vps},
          {"realized_J", r.realized_J},
          {"realized_profit", r.realized_profit},
          {"realized_unserved_vps", r.realized_unserved_vps},
          {"realized_feasible", r.realized_feasible},
          {"gap_J", r.gap_J},
          {"gap_profit", r.gap_profit},
          {"gap_q_linf", r.gap_q_linf}};
}

std::string csv_stamp(const ExperimentConfig& config) {
  return "# config_hash=" + config_hash(config) +
         " seed=" + std::to_string(config.seed) + " version=" + kVersion + "\n";
}

}  // namespace

ExperimentConfig parse_config(const std::string& text) {
  return config_from_json(parse_text(text, "config"));
}

ExperimentConfig load_config(const std::string& path) {
  return config_from_json(parse_text(read_file(path), path));
}

std::string serialize_config(const ExperimentConfig& config) {
  return dump(config_to_json(config));
}

std::string config_hash(const ExperimentConfig& config) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a 64
  for (unsigned char byte : serialize_config(config)) {
    h ^= byte;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string serialize_model(const PopulationModel& model,
                            const ExperimentConfig& config) {
  json j = stamped(config);
  j["model"] = population_to_json(model);
  return dump(j);
}

PopulationModel load_model(const std::string& path) {
  return population_from_json(loaded_payload(path, "model"), path + ".model");
}

std::string serialize_plan(const PlanRecord& record,
                           const ExperimentConfig& config) {
  json j = stamped(config);
  j["plan"] = plan_to_json(record.plan);
  j["plan"]["evaluation"] = evaluation_to_json(record.evaluation,
                                               record.proposition);
  return dump(j);
}

PlanRecord load_plan(const std::string& path) {
  json payload = loaded_payload(path, "plan");
  const std::string where = path + ".plan";
  expect_keys(payload, where,
              {"latencies_s", "prices", "q", "human_vps", "auto_vps",
               "evaluation"});
  if (!payload.contains("evaluation"))
    fail_parse(where + ".evaluation", "missing required key");
  json plan_only = payload;
  plan_only.erase("evaluation");

  PlanRecord record;
  record.plan = plan_from_json(plan_only, where);
  const json& ev = payload.at("evaluation");
  const std::string ev_path = where + ".evaluation";
  expect_keys(ev, ev_path,
              {"social_cost_s", "profit", "unserved_human_vps", "feasible",
               "k", "proposition_holds"});
  record.evaluation.social_cost_s = get_double(ev, ev_path, "social_cost_s");
  record.evaluation.profit = get_double(ev, ev_path, "profit");
  record.evaluation.unserved_human_vps =
      get_double(ev, ev_path, "unserved_human_vps");
  if (!ev.contains("feasible") || !ev.at("feasible").is_boolean())
    fail_parse(ev_path + ".feasible", "expected a boolean");
  record.evaluation.feasible = ev.at("feasible").get<bool>();
  record.evaluation.k = get_int(ev, ev_path, "k");
  if (!ev.contains("proposition_holds") ||
      !ev.at("proposition_holds").is_boolean())
    fail_parse(ev_path + ".proposition_holds", "expected a boolean");
  record.proposition = ev.at("proposition_holds").get<bool>();
  return record;
}

std::string serialize_simulation(const SimulationResult& result,
                                 const ExperimentConfig& config) {
  json j = stamped(config);
  j["simulation"] = simulation_to_json(result);
  return dump(j);
}

std::string serialize_report(const ExperimentReport& report,
                             const ExperimentConfig& config) {
  json j = stamped(config);
  j["config"] = config_to_json(config);
  j["learned_model"] = population_to_json(report.learned);
  j["learning_curve"] = report.learning_curve;
  json arms = json::array();
  for (const ArmOutcome* arm :
       {&report.learned_arm, &report.oracle_arm, &report.zero_price_arm}) {
    json a;
    a["name"] = arm->name;
    a["plan"] = plan_to_json(arm->plan);
    a["planned"] = evaluation_to_json(arm->planned, false);
    a["planned"].erase("proposition_holds");
    a["realized"] = simulation_to_json(arm->realized);
    json log = json::array();
    for (const SearchImprovement& row : arm->search_log)
      log.push_back({{"candidate_index", row.candidate_index},
                     {"social_cost_s", row.social_cost_s},
                     {"profit", row.profit}});
    a["search_log"] = std::move(log);
    arms.push_back(std::move(a));
  }
  j["arms"] = std::move(arms);
  return dump(j);
}

std::string learning_curve_csv(const std::vector<double>& curve,
                               const ExperimentConfig& config) {
  std::string out = csv_stamp(config) + "answers,learning_error\n";
  for (std::size_t i = 0; i < curve.size(); ++i)
    out += std::to_string(i + 1) + "," + fmt_double(curve[i]) + "\n";
  return out;
}

std::string choices_csv(const Population& population,
                        const SimulatedChoices& sim,
                        const ExperimentConfig& config) {
  if (population.thetas.size() != sim.choices.size())
    throw ValidationError("choices_csv: population/choices size mismatch");
  std::string out = csv_stamp(config) + "user,theta,choice\n";
  for (std::size_t u = 0; u < sim.choices.size(); ++u)
    out += std::to_string(u) + "," + fmt_double(population.thetas[u]) + "," +
           std::to_string(sim.choices[u]) + "\n";
  return out;
}

std::string search_log_csv(const std::vector<SearchImprovement>& log,
                           const ExperimentConfig& config) {
  std::string out = csv_stamp(config) + "candidate_index,social_cost_s,profit\n";
  for (const SearchImprovement& row : log)
    out += std::to_string(row.candidate_index) + "," +
           fmt_double(row.social_cost_s) + "," + fmt_double(row.profit) + "\n";
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path + ": cannot open file");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError(path + ": cannot open file for writing");
  out << content;
  if (!out.flush()) throw ParseError(path + ": write failed");
}

}  // namespace roadplan
