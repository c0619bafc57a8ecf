#include "roadplan/cli.hpp"

#include <cctype>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "roadplan/io.hpp"
#include "roadplan/rng.hpp"

namespace roadplan {

namespace {

namespace fs = std::filesystem;

std::string fmt(const char* pattern, double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), pattern, x);
  return buf;
}

std::string describe(const PopulationModel& model) {
  if (model.is_beta())
    return "Beta(" + fmt("%.4g", model.alpha()) + ", " +
           fmt("%.4g", model.beta_param()) + "), mean " +
           fmt("%.4g", model.mean());
  return "empirical (" + std::to_string(model.samples().size()) +
         " samples), mean " + fmt("%.4g", model.mean());
}

std::string option_text(const MenuOption& o) {
  return "ℓ=" + fmt("%g", o.ell_s) + "s, price=" + fmt("%g", o.price);
}

std::string trim(std::string s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.erase(s.begin());
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.pop_back();
  return s;
}

fs::path prepare_out_dir(const ExperimentConfig& config) {
  fs::path dir(config.output_dir);
  fs::create_directories(dir);
  return dir;
}

void emit(const fs::path& path, const std::string& content, std::ostream& out) {
  write_file(path.string(), content);
  out << "wrote " << path.string() << "\n";
}

void cmd_learn(const ExperimentConfig& config, bool interactive,
               std::istream& in, std::ostream& out) {
  Network net = config.network();
  std::vector<Query> candidates = candidate_queries_for(
      net, config.price_cap, config.latency_cap_s, config.learn);
  if (candidates.empty())
    throw ValidationError("learning.candidates: trade-off grid is empty");
  fs::path dir = prepare_out_dir(config);

  PopulationModel model = PopulationModel::uniform();
  if (interactive) {
    // One terminal user, same seed layout as a simulated user 0.
    std::uint64_t user_seed =
        derive_seed(derive_seed(config.seed, kSeedElicitation), 0);
    PopulationModel prior = PopulationModel::uniform();
    std::vector<Observation> obs;
    int budget = config.learn.query_budget;
    for (int t = 0; t < budget; ++t) {
      PosteriorSamples post = mh_posterior(
          obs, prior, config.noise, config.learn.mh_steps,
          config.learn.mh_burn_in, config.learn.proposal_sd,
          derive_seed(user_seed, static_cast<std::uint64_t>(3 * t)));
      const Query& query = select_query(post, candidates, config.noise);
      out << "Option A: " << option_text(query.a)
          << " | Option B: " << option_text(query.b) << "\n";
      out << "Answer [A/B]: " << std::flush;
      std::string line;
      if (!std::getline(in, line))
        throw InvalidAnswer("learn: expected A or B, got end of input");
      line = trim(line);
      int answer;
      if (line == "A" || line == "a") answer = 0;
      else if (line == "B" || line == "b") answer = 1;
      else throw InvalidAnswer("learn: expected A or B, got \"" + line + "\"");
      obs.push_back({0, query, answer});
    }
    PosteriorSamples final_post = mh_posterior(
        obs, prior, config.noise, config.learn.mh_steps,
        config.learn.mh_burn_in, config.learn.proposal_sd,
        derive_seed(user_seed, static_cast<std::uint64_t>(3 * budget)));
    model = fit_population({final_post});
  } else {
    Population pop =
        sample_population(config.truth, config.learn.users,
                          derive_seed(config.seed, kSeedPopulation));
    std::vector<PopulationModel> per_step;
    model = elicitation_phase(pop, config.learn, config.noise, candidates,
                              derive_seed(config.seed, kSeedElicitation),
                              /*active=*/true, &per_step);
    std::vector<double> curve;
    Menu probe = reference_menu();
    for (const PopulationModel& m : per_step)
      curve.push_back(learning_error(m, config.truth, probe));
    emit(dir / "learning_curve.csv", learning_curve_csv(curve, config), out);
    if (!curve.empty())
      out << "learning_error after " << curve.size()
          << " answers: " << fmt("%.4g", curve.back()) << "\n";
  }
  out << "fitted model: " << describe(model) << "\n";
  emit(dir / "model.json", serialize_model(model, config), out);
}

void cmd_plan(const ExperimentConfig& config, const std::string& model_path,
              std::ostream& out) {
  PopulationModel belief =
      model_path.empty() ? config.truth : load_model(model_path);
  PlanningProblem problem = config.problem(belief);
  std::vector<SearchImprovement> log;
  auto [plan, eval] = optimize(problem, &log);
  PlanRecord record{plan, eval,
                    proposition_holds(plan, problem.network,
                                      latency_grid_step(problem))};
  out << "J=" << fmt("%.4f", eval.social_cost_s)
      << " s, profit=" << fmt("%.4f", eval.profit) << ", k=" << eval.k
      << ", proposition=" << (record.proposition ? "yes" : "no") << "\n";
  fs::path dir = prepare_out_dir(config);
  emit(dir / "plan.json", serialize_plan(record, config), out);
  emit(dir / "search_log.csv", search_log_csv(log, config), out);
}

void cmd_simulate(const ExperimentConfig& config, const std::string& plan_path,
                  std::ostream& out) {
  PlanRecord record = load_plan(plan_path);
  Population pop = sample_population(config.truth, config.learn.users,
                                     derive_seed(config.seed, kSeedPopulation));
  SimulatedChoices sim =
      simulate_choices(pop, record.plan.menu(), config.noise,
                       derive_seed(config.seed, kSeedChoices));
  SimulationResult result =
      evaluate_realized(config.problem(config.truth), record.plan,
                        sim.empirical_q);
  out << "realized J=" << fmt("%.4f", result.realized_J)
      << " s, profit=" << fmt("%.4f", result.realized_profit)
      << ", gap_J=" << fmt("%+.4f", result.gap_J)
      << ", gap_q_linf=" << fmt("%.4f", result.gap_q_linf) << "\n";
  fs::path dir = prepare_out_dir(config);
  emit(dir / "simulation.json", serialize_simulation(result, config), out);
  emit(dir / "choices.csv", choices_csv(pop, sim, config), out);
}

void cmd_experiment(const ExperimentConfig& config, std::ostream& out) {
  ExperimentReport report = run_experiment(config);
  out << "config " << config_hash(config) << "  seed " << config.seed << "\n";
  out << "learned model: " << describe(report.learned) << "\n";
  if (!report.learning_curve.empty())
    out << "learning_error after " << report.learning_curve.size()
        << " answers: " << fmt("%.4g", report.learning_curve.back()) << "\n";
  char line[160];
  std::snprintf(line, sizeof(line), "%-11s %10s %11s %8s %9s %9s\n", "arm",
                "planned_J", "realized_J", "profit", "unserved", "feasible");
  out << line;
  for (const ArmOutcome* arm :
       {&report.learned_arm, &report.oracle_arm, &report.zero_price_arm}) {
    std::snprintf(line, sizeof(line), "%-11s %10.3f %11.3f %8.3f %9.3f %9s\n",
                  arm->name.c_str(), arm->planned.social_cost_s,
                  arm->realized.realized_J, arm->realized.realized_profit,
                  arm->realized.realized_unserved_vps,
                  arm->planned.feasible ? "yes" : "no");
    out << line;
  }
  fs::path dir = prepare_out_dir(config);
  emit(dir / "report.json", serialize_report(report, config), out);
  emit(dir / "learning_curve.csv",
       learning_curve_csv(report.learning_curve, config), out);
  emit(dir / "search_log.csv",
       search_log_csv(report.learned_arm.search_log, config), out);
}

template <typename Body>
int run_guarded(std::ostream& err, Body&& body) {
  try {
    body();
    return 0;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const InvalidAnswer& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const Infeasible& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 4;
  }
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::istream& in,
             std::ostream& out, std::ostream& err) {
  CLI::App app{"menu planning for a shared human/autonomous road network"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string model_path;
  std::string plan_path;
  std::uint64_t seed = 0;
  bool interactive = false;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", config_path, "experiment config (JSON)")
        ->required();
    cmd->add_option("--seed", seed, "override the config seed");
    cmd->add_option("--out", out_dir, "override the config output_dir");
  };
  CLI::App* learn =
      app.add_subcommand("learn", "elicit preferences, fit a population model");
  add_common(learn);
  learn->add_flag("--interactive", interactive,
                  "answer the queries on the terminal instead of simulating");
  CLI::App* plan = app.add_subcommand("plan", "optimize a latency/price menu");
  add_common(plan);
  plan->add_option("--model", model_path,
                   "population model JSON (default: the configured truth)");
  CLI::App* simulate =
      app.add_subcommand("simulate", "realize a plan against sampled users");
  add_common(simulate);
  simulate->add_option("--plan", plan_path, "plan JSON from `plan`")->required();
  CLI::App* experiment = app.add_subcommand(
      "experiment", "full learn/plan/simulate pipeline with baselines");
  add_common(experiment);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return 2;
  }

  return run_guarded(err, [&] {
    ExperimentConfig config = load_config(config_path);
    CLI::App* active = app.get_subcommands().front();
    if (active->count("--seed")) config.seed = seed;
    if (active->count("--out")) config.output_dir = out_dir;

    if (active == learn) cmd_learn(config, interactive, in, out);
    else if (active == plan) cmd_plan(config, model_path, out);
    else if (active == simulate) cmd_simulate(config, plan_path, out);
    else cmd_experiment(config, out);
  });
}

int cli_main(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return cli_main(args, std::cin, std::cout, std::cerr);
}

}  // namespace roadplan
