#pragma once

// Built-in configurations for each figure setup. Captions leave grid size, t_end and
// some initial data open; every value a preset fixes beyond the caption is listed in
// `pins` and copied into the summary of each run.

#include <string>
#include <vector>

#include "nnlif/config.hpp"
#include "nnlif/experiments.hpp"

namespace nnlif {

struct PresetPanel {
    std::string name;
    Action action;
    ExperimentConfig config;
};

struct Preset {
    std::string id;
    std::string description;
    std::vector<PresetPanel> panels;
    std::vector<std::string> pins;
};

const std::vector<Preset>& presets();
/// nullptr when no preset has this id.
const Preset* find_preset(const std::string& id);
/// Throws std::invalid_argument naming the available panels when `name` is unknown.
const PresetPanel& find_panel(const Preset& preset, const std::string& name);

/// Runs every panel (or only `panel` when non-empty) with `overrides` applied; each
/// panel's bundle is a child named after it.
OutputBundle run_preset(const Preset& preset, const std::vector<std::string>& overrides = {},
                        const std::string& panel = "");

}  // namespace nnlif
