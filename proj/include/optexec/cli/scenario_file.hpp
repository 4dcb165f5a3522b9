#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "optexec/scenario.hpp"

namespace optexec::cli {

/// Malformed or invalid scenario file. The message starts with the JSON
/// path of the offending value (e.g. "$.eta.rate").
class ScenarioFileError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Top-level keys: t0, T, x0, lambda (numbers), eta and sigma (coefficient
/// objects) and optional frame ("physical" | "trader"). Coefficient objects
/// carry "family" plus
///   Constant          c0
///   Exponential       c0, rate
///   CoshPower         c0, gamma, a, power (1 | 2)
///   QuadraticProduct  c0, k, optional power (1 | 0.5)
///   Tabulated         knots, values (arrays)
/// Unknown keys are rejected.
Scenario parse_scenario(const nlohmann::json& document);
Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::filesystem::path& path);

}  // namespace optexec::cli
