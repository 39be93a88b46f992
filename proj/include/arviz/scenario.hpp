#pragma once

#include <filesystem>
#include <string>

#include "arviz/features.hpp"
#include "arviz/frame.hpp"
#include "arviz/world.hpp"

namespace arviz {

struct SimParams {
    double timeCap = 3600.0;         // seconds of sim time before a trial times out
    double holdReplanAfter = 30.0;   // seconds blocked before a robot replans

    bool operator==(const SimParams&) const = default;
};

/// Everything a run needs besides seeds and policies. Loaded from one file.
struct ScenarioConfig {
    WarehouseConfig world;
    WorkerParams worker;
    DiscretizationThresholds thresholds;
    RenderParams render;
    SimParams sim;

    bool operator==(const ScenarioConfig&) const = default;
};

void validate(const ScenarioConfig& config);

ScenarioConfig main_scenario();
ScenarioConfig mini_scenario();
/// "main" or "mini"; throws ConfigError otherwise.
ScenarioConfig preset_scenario(std::string_view name);

/// YAML text layered over `base` (main when absent). Unknown keys and
/// invalid values raise ConfigError.
ScenarioConfig parse_scenario(const std::string& yamlText);
ScenarioConfig load_scenario(const std::filesystem::path& path);
/// Canonical YAML (fixed key order, fixed precision).
std::string to_yaml(const ScenarioConfig& config);
/// Content hash of the canonical YAML.
std::string fingerprint(const ScenarioConfig& config);

}  // namespace arviz
