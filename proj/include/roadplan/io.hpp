#pragma once

#include <string>
#include <utility>
#include <vector>

#include "roadplan/experiment.hpp"

namespace roadplan {

// Config files are strict JSON: unknown keys are rejected with their path.
// Road lengths/speeds may use km / km/h on disk; everything is SI in memory.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text);

/// Canonical form: SI units only, alphabetical keys, two-space indent,
/// trailing newline. parse_config(serialize_config(c)) == c.
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a 64-bit over the canonical serialization, 16 lowercase hex chars.
/// Stamped into every output file so results can be traced to their config.
std::string config_hash(const ExperimentConfig& config);

/// Plan file payload: the menu, its induced flows, the planner's evaluation,
/// and whether the optimality structure held at one latency-grid step.
struct PlanRecord {
  Plan plan;
  PlanEvaluation evaluation;
  bool proposition = false;
};

// JSON payloads; every serializer embeds version, config_hash, and seed.
std::string serialize_model(const PopulationModel& model,
                            const ExperimentConfig& config);
PopulationModel load_model(const std::string& path);

std::string serialize_plan(const PlanRecord& record,
                           const ExperimentConfig& config);
PlanRecord load_plan(const std::string& path);

std::string serialize_simulation(const SimulationResult& result,
                                 const ExperimentConfig& config);

std::string serialize_report(const ExperimentReport& report,
                             const ExperimentConfig& config);

// CSV traces: one `# config_hash=... seed=... version=...` comment line,
// then a header row; doubles printed with %.17g.
std::string learning_curve_csv(const std::vector<double>& curve,
                               const ExperimentConfig& config);
std::string choices_csv(const Population& population,
                        const SimulatedChoices& sim,
                        const ExperimentConfig& config);
std::string search_log_csv(const std::vector<SearchImprovement>& log,
                           const ExperimentConfig& config);

std::string read_file(const std::string& path);  // ParseError if unreadable
void write_file(const std::string& path, const std::string& content);

}  // namespace roadplan
