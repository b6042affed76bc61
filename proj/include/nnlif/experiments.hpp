#pragma once

// One entry point per CLI action: runs the module operation for a configuration
// and collects everything worth writing into an OutputBundle.

#include <optional>
#include <string>

#include "nnlif/config.hpp"
#include "nnlif/output.hpp"

namespace nnlif {

enum class Action { Steady, Bifurcation, Simulate, Stability, BlowupCheck, CompareRefractory };

std::string to_string(Action a);
/// Accepts the CLI spellings (steady, bifurcation, simulate, stability, blowup-check,
/// compare-refractory).
std::optional<Action> action_from_string(const std::string& s);

/// Validates cfg, runs the action and returns the bundle. The bundle's config_text
/// is render_config(cfg).
OutputBundle run_experiment(Action action, const ExperimentConfig& cfg);

/// Summary entries and files of a finished simulation, as run_experiment writes them.
OutputBundle simulation_bundle(const SimulationResult& r, const RunConfig& cfg);

}  // namespace nnlif
