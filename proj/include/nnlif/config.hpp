#pragma once

// Plain-text experiment configuration: sections of `key = value` lines.
//
//   [model]    populations, then the parameter names of OnePopParameters or
//              ModelParameters (V_F, V_R and refractory_mode apply to the
//              active one)
//   [grid]     v_left, n_cells
//   [initial]  kind, v0_E, sigma_E, R0_E, v0_I, sigma_I, R0_I, N_E, N_I,
//              root_index, perturbation
//   [run]      t_end, output_interval, cfl_safety, dt_bar, N_cap, dt_floor,
//              self_drive_cap, entropy, entropy_root, window, flatness,
//              min_peaks, spacing_cv, amplitude_decay
//   [output]   snapshot_times
//   [scan]     sweep, sweep_values, sweep_range, scan_points
//
// Every key is optional except N_E (and N_I for two populations) with
// kind = stationary, and sweep for a bifurcation scan. '#' and ';' start comments.

#include <stdexcept>
#include <string>
#include <vector>

#include "nnlif/network.hpp"
#include "nnlif/steady_state.hpp"

namespace nnlif {

/// Raised for malformed configuration text; line() is 0 for command-line overrides.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& message, int line)
        : std::runtime_error(message), line_(line) {}
    int line() const noexcept { return line_; }

private:
    int line_;
};

struct SweepSpec {
    std::string parameter;  // empty: no sweep
    std::vector<double> values;

    bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
    RunConfig run;
    SweepSpec sweep;
    int scan_points = kDefaultScanPoints;

    bool operator==(const ExperimentConfig&) const = default;
};

struct ParsedConfig {
    ExperimentConfig config;
    /// "section.key" of every applicable key left at its default.
    std::vector<std::string> defaulted;
};

/// Parses a document; `overrides` are "section.key=value" strings applied after it.
ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {});

/// Applies overrides to an existing configuration (e.g. a preset).
ExperimentConfig apply_overrides(ExperimentConfig cfg, const std::vector<std::string>& overrides);

/// Renders every key that applies to cfg's population count; parse_config inverts it.
std::string render_config(const ExperimentConfig& cfg);

/// Checks the parts that the simulation and steady-state code would reject later.
void validate_experiment(const ExperimentConfig& cfg);

}  // namespace nnlif
