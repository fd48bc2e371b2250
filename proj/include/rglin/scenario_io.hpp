#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "rglin/explore.hpp"

namespace rglin {

/// A scenario file failed validation (unknown field, bad type, bad value).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr int kFormatVersion = 1;

/// Strict parse: unknown fields are rejected, every value is validated.
Scenario scenario_from_json(const nlohmann::json& j);
nlohmann::json scenario_to_json(const Scenario& sc);

Scenario load_scenario_file(const std::string& path);  // SchemaError on any failure

/// Canned setups for the classic stack and queue races, some with a
/// fixed replay schedule.
struct Canned {
  Scenario scenario;
  std::optional<Schedule> schedule;
};

std::optional<Canned> canned_scenario(const std::string& name);
std::vector<std::string> canned_names();

/// Resolves a canned name or a file path.
Canned resolve_scenario(const std::string& name_or_path);

nlohmann::json state_to_json(const SystemState& s);
nlohmann::json history_to_json(const History& h);
nlohmann::json trace_to_json(const Trace& t, std::size_t id);

/// ReportFile: scenario, per-trace schedule/steps/history/verdicts,
/// summary and conjecture counterexamples.
nlohmann::json report_to_json(const Scenario& sc, const std::vector<Trace>& traces,
                              const CorrelationReport& report);

std::string canonical_dump(const nlohmann::json& j);

}  // namespace rglin
