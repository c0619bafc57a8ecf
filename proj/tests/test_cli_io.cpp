#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "roadplan/cli.hpp"
#include "roadplan/io.hpp"
#include "support/scenarios.hpp"

using namespace roadplan;
namespace fs = std::filesystem;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig c;
  c.roads = {fixtures::make_road(1000.0, 25.0), fixtures::make_road(1000.0, 20.0)};
  c.human_demand_vps = 0.4;
  c.auto_demand_vps = 0.25;
  c.profit_floor = 0.1;
  c.price_cap = 8.0;
  c.latency_cap_s = 100.0;
  c.unserved_penalty_s = 200.0;
  c.latency_grid = 5;
  c.price_grid = 5;
  c.truth = PopulationModel::beta(2.0, 3.0);
  c.noise = {ChoiceMode::kNoisy, 0.5};
  c.learn.users = 4;
  c.learn.query_budget = 2;
  c.learn.mh_steps = 300;
  c.learn.mh_burn_in = 100;
  c.learn.candidate_latency_points = 4;
  c.learn.candidate_price_points = 4;
  c.seed = 11;
  c.output_dir = "out-tiny";
  return c;
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("roadplan_test_" + std::to_string(std::rand()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str(const std::string& leaf) const { return (path / leaf).string(); }
};

int run_cli(const std::vector<std::string>& args, std::string* stdout_text = nullptr,
            const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  std::ostringstream out, err;
  int code = cli_main(args, in, out, err);
  if (stdout_text) *stdout_text = out.str() + err.str();
  return code;
}

}  // namespace

TEST_CASE("config round trip is exact") {
  ExperimentConfig c = tiny_config();
  ExperimentConfig back = parse_config(serialize_config(c));
  CHECK(back == c);
  CHECK(config_hash(back) == config_hash(c));

  c.truth = PopulationModel::empirical({0.25, 0.5});
  back = parse_config(serialize_config(c));
  CHECK(back == c);
}

TEST_CASE("config hash is stable across runs and sensitive to content") {
  ExperimentConfig c = tiny_config();
  std::string h = config_hash(c);
  CHECK(h.size() == 16);
  CHECK(h == config_hash(c));
  ExperimentConfig other = c;
  other.seed += 1;
  CHECK(config_hash(other) != h);
}

TEST_CASE("unit conversion derives free-flow latencies") {
  ExperimentConfig c = tiny_config();
  std::string text = serialize_config(c);
  // Swap road 0 to km / km/h spellings of the same quantities.
  auto pos = text.find("\"length_m\": 1000.0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 18, "\"length_km\": 1.0");
  pos = text.find("\"free_speed_mps\": 25.0");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 22, "\"free_speed_kmh\": 90.0");
  ExperimentConfig back = parse_config(text);
  Network net = back.network();
  CHECK(net.free_flow_latency(0) == doctest::Approx(40.0).epsilon(1e-12));
  CHECK(net.free_flow_latency(1) == doctest::Approx(50.0).epsilon(1e-12));
}

TEST_CASE("strict schema rejections carry field paths") {
  ExperimentConfig c = tiny_config();
  std::string good = serialize_config(c);

  SUBCASE("unknown key") {
    std::string text = good;
    text.replace(text.find("\"price_cap\""), 11, "\"price_gap\"");
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("planner.price_gap: unknown key"),
                         ParseError);
  }
  SUBCASE("both length spellings") {
    std::string text = good;
    text.replace(text.find("\"length_m\": 1000.0"), 18,
                 "\"length_m\": 1000.0, \"length_km\": 1.0");
    CHECK_THROWS_AS(parse_config(text), ParseError);
  }
  SUBCASE("wrong type") {
    std::string text = good;
    text.replace(text.find("\"users\": 4"), 10, "\"users\": \"four\"");
    CHECK_THROWS_WITH_AS(parse_config(text),
                         doctest::Contains("learning.users"), ParseError);
  }
  SUBCASE("invalid JSON") {
    CHECK_THROWS_AS(parse_config("{ not json"), ParseError);
  }
  SUBCASE("headway invariant names the field") {
    std::string text = good;
    auto pos = text.find("\"headway_auto_s\": 1.0");
    text.replace(pos, 21, "\"headway_auto_s\": 3.0");
    CHECK_THROWS_WITH_AS(
        parse_config(text),
        doctest::Contains("network.roads[0].headway_auto_s"), ValidationError);
  }
  SUBCASE("missing section") {
    std::string text = good;
    auto pos = text.find("\"demand\"");
    auto end = text.find("},", pos) + 2;
    text.erase(pos, end - pos);
    CHECK_THROWS_WITH_AS(parse_config(text), doctest::Contains("demand"),
                         ParseError);
  }
}

TEST_CASE("model and plan files round trip with stamps") {
  ExperimentConfig c = tiny_config();
  TempDir dir;

  PopulationModel model = PopulationModel::beta(1.5, 2.25);
  write_file(dir.str("model.json"), serialize_model(model, c));
  CHECK(load_model(dir.str("model.json")) == model);

  auto [plan, eval] = optimize(c.problem(c.truth));
  PlanRecord record{plan, eval, true};
  write_file(dir.str("plan.json"), serialize_plan(record, c));
  PlanRecord back = load_plan(dir.str("plan.json"));
  CHECK(back.plan.ell.latencies_s == plan.ell.latencies_s);
  CHECK(back.plan.prices == plan.prices);
  CHECK(back.plan.q.q == plan.q.q);
  CHECK(back.plan.flows.human_vps == plan.flows.human_vps);
  CHECK(back.plan.flows.auto_vps == plan.flows.auto_vps);
  CHECK(back.evaluation.social_cost_s == eval.social_cost_s);
  CHECK(back.evaluation.profit == eval.profit);
  CHECK(back.evaluation.k == eval.k);
  CHECK(back.evaluation.feasible == eval.feasible);
  CHECK(back.proposition);

  std::string stamped = read_file(dir.str("model.json"));
  CHECK(stamped.find("\"config_hash\": \"" + config_hash(c) + "\"") !=
        std::string::npos);
  CHECK(stamped.find("\"version\": \"0.1.0\"") != std::string::npos);
  CHECK(stamped.find("\"seed\": 11") != std::string::npos);

  SUBCASE("version mismatch is rejected") {
    std::string text = read_file(dir.str("model.json"));
    text.replace(text.find("0.1.0"), 5, "9.9.9");
    write_file(dir.str("model_bad.json"), text);
    CHECK_THROWS_AS(load_model(dir.str("model_bad.json")), ParseError);
  }
}

TEST_CASE("csv traces carry the stamp comment and column headers") {
  ExperimentConfig c = tiny_config();
  std::string csv = learning_curve_csv({0.5, 0.25}, c);
  std::string stamp = "# config_hash=" + config_hash(c) + " seed=11 version=0.1.0\n";
  CHECK(csv.substr(0, stamp.size()) == stamp);
  CHECK(csv.find("answers,learning_error\n1,0.5\n2,0.25\n") != std::string::npos);

  std::string log =
      search_log_csv({{0, 41.5, 0.25}, {7, 40.0, 0.5}}, c);
  CHECK(log.find("candidate_index,social_cost_s,profit\n0,41.5,0.25\n7,40,0.5\n") !=
        std::string::npos);
}

TEST_CASE("cli pipeline: learn, plan, simulate, experiment") {
  ExperimentConfig c = tiny_config();
  TempDir dir;
  write_file(dir.str("config.json"), serialize_config(c));

  std::string text;
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--out",
                 dir.str("lrn")}, &text) == 0);
  CHECK(fs::exists(dir.str("lrn") + "/model.json"));
  CHECK(fs::exists(dir.str("lrn") + "/learning_curve.csv"));

  CHECK(run_cli({"plan", "--config", dir.str("config.json"), "--model",
                 dir.str("lrn") + "/model.json", "--out", dir.str("pln")},
                &text) == 0);
  CHECK(fs::exists(dir.str("pln") + "/plan.json"));
  CHECK(text.find("proposition=") != std::string::npos);

  CHECK(run_cli({"simulate", "--config", dir.str("config.json"), "--plan",
                 dir.str("pln") + "/plan.json", "--out", dir.str("sim")},
                &text) == 0);
  CHECK(fs::exists(dir.str("sim") + "/simulation.json"));
  CHECK(fs::exists(dir.str("sim") + "/choices.csv"));

  CHECK(run_cli({"experiment", "--config", dir.str("config.json"), "--out",
                 dir.str("exp")}, &text) == 0);
  CHECK(fs::exists(dir.str("exp") + "/report.json"));
  CHECK(text.find("learned") != std::string::npos);
  CHECK(text.find("oracle") != std::string::npos);
  CHECK(text.find("zero_price") != std::string::npos);
}

TEST_CASE("cli exit codes map the error taxonomy") {
  ExperimentConfig c = tiny_config();
  TempDir dir;

  SUBCASE("missing config file is a parse failure") {
    std::string text;
    CHECK(run_cli({"plan", "--config", dir.str("nope.json")}, &text) == 2);
    CHECK(text.find("cannot open") != std::string::npos);
  }
  SUBCASE("unsatisfiable profit floor is infeasible") {
    c.profit_floor = c.price_cap * c.auto_demand_vps + 1.0;
    write_file(dir.str("config.json"), serialize_config(c));
    CHECK(run_cli({"plan", "--config", dir.str("config.json"), "--out",
                   dir.str("o")}) == 3);
  }
  SUBCASE("bad subcommand usage is a parse failure") {
    CHECK(run_cli({"simulate", "--config", dir.str("nope.json")}) == 2);
    CHECK(run_cli({"frobnicate"}) == 2);
  }
}

TEST_CASE("interactive learn matches scripted answers and rejects others") {
  ExperimentConfig c = tiny_config();
  c.learn.query_budget = 3;
  TempDir dir;
  write_file(dir.str("config.json"), serialize_config(c));

  // Same answers in different spellings, written to the same place, must
  // produce the same bytes.
  std::string first, second;
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--interactive",
                 "--out", dir.str("a")}, &first, "A\nB\nA\n") == 0);
  std::string once = read_file(dir.str("a") + "/model.json");
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--interactive",
                 "--out", dir.str("a")}, &second, " a\n b\na \n") == 0);
  CHECK(once == read_file(dir.str("a") + "/model.json"));
  CHECK(first.find("Option A: ") != std::string::npos);
  CHECK(first.find(" | Option B: ") != std::string::npos);

  std::string text;
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--interactive",
                 "--out", dir.str("cc")}, &text, "A\nC\n") == 2);
  CHECK(text.find("expected A or B") != std::string::npos);
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--interactive",
                 "--out", dir.str("d")}, &text, "A\n") == 2);
}

TEST_CASE("seed and out overrides change the effective config") {
  ExperimentConfig c = tiny_config();
  TempDir dir;
  write_file(dir.str("config.json"), serialize_config(c));

  std::string text;
  CHECK(run_cli({"learn", "--config", dir.str("config.json"), "--seed", "99",
                 "--out", dir.str("s99")}, &text) == 0);
  std::string stamped = read_file(dir.str("s99") + "/model.json");
  CHECK(stamped.find("\"seed\": 99") != std::string::npos);

  ExperimentConfig shifted = c;
  shifted.seed = 99;
  shifted.output_dir = dir.str("s99");
  CHECK(stamped.find(config_hash(shifted)) != std::string::npos);
}

TEST_CASE("identical runs produce byte-identical bundles") {
  ExperimentConfig c = tiny_config();
  TempDir dir;
  write_file(dir.str("config.json"), serialize_config(c));

  auto run_into = [&](const std::string& out) {
    REQUIRE(run_cli({"experiment", "--config", dir.str("config.json"), "--out",
                     out}) == 0);
    return read_file(out + "/report.json") + read_file(out + "/learning_curve.csv") +
           read_file(out + "/search_log.csv");
  };
  std::string once = run_into(dir.str("run"));
  std::string again = run_into(dir.str("run"));
  CHECK(once == again);
}
