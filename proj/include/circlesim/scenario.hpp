#ifndef CIRCLESIM_SCENARIO_HPP
#define CIRCLESIM_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include <json.hpp>

#include "circlesim/conservation.hpp"

namespace circlesim {

// Appendix-style frame-of-reference check requested by a scenario.
struct FrameCheckSpec {
  SubsystemLabel frame;
  SubsystemLabel sys;
  ModeWavefunction target;
};

// Declarative description of one run: lattice sizes, initial states,
// interaction chain, measurement, conservation scope, trial mode.
struct ScenarioConfig {
  std::string name;
  std::string description;
  std::vector<SubsystemLabel> labels;  // declared order
  std::map<SubsystemLabel, int> dims;
  std::map<SubsystemLabel, ModeWavefunction> initial;
  std::vector<InteractionKind> chain;
  SubsystemLabel measure = SubsystemLabel::System;
  std::set<SubsystemLabel> scope;
  bool sample_mode = false;
  long trials = 0;
  std::uint64_t seed = 0;
  WrapPolicy wrap_policy = WrapPolicy::kWarn;
  bool expect_conservation = true;
  std::optional<FrameCheckSpec> frame_check;
  std::optional<int> table1_l0;
  nlohmann::json echo;  // the raw config, echoed into reports
};

// Parses and validates a config; throws ConfigError with the offending field
// named. The support-fit rule is checked here; violations follow the wrap
// policy.
ScenarioConfig parse_scenario(const nlohmann::json& doc);
ScenarioConfig load_scenario_file(const std::string& path);

// Names and raw JSON of the scenarios shipped with the binary.
std::vector<std::string> bundled_scenario_names();
const std::string& bundled_scenario_json(const std::string& name);

struct Report {
  std::string scenario;
  ConservationLedger ledger;
  bool conservation_expected = true;
  bool conservation_violated = false;
  int wrap_events = 0;
  nlohmann::json json;  // the full machine-readable report
};

// Executes the chain and measurement, builds the ledger and all requested
// report sections. Deterministic: exhaustive mode has no randomness, sample
// mode is a pure function of the seed.
Report run_scenario(const ScenarioConfig& config);

enum class ReportFormat { kJson, kCsv };

void emit_report(const Report& report, ReportFormat format,
                 std::ostream& out);
void emit_report_file(const Report& report, ReportFormat format,
                      const std::string& path);

}  // namespace circlesim

#endif
