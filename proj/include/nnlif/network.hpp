#pragma once

// Full simulations of one or two coupled populations, blow-up detection, diagnostics
// and classification of the long-time behaviour.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "nnlif/grid.hpp"
#include "nnlif/params.hpp"
#include "nnlif/steady_state.hpp"

namespace nnlif {

struct GridSpec {
    double v_left = 6.0;  // the mesh starts at -v_left (adjusted so V_R is a node)
    std::size_t n_cells = 1000;

    bool operator==(const GridSpec&) const = default;
};

enum class InitialKind {
    Gaussian,    // normal profile per population plus R0
    Stationary,  // stationary profile at given rates
    SteadyRoot,  // stationary profile at a solved steady state
};

std::string to_string(InitialKind k);
InitialKind initial_kind_from_string(const std::string& s);

struct GaussianSpec {
    double v0 = 0.0;
    double sigma = 0.5;
    double R0 = 0.0;  // density mass is 1 - R0

    bool operator==(const GaussianSpec&) const = default;
};

struct InitialSpec {
    InitialKind kind = InitialKind::Gaussian;
    GaussianSpec E;
    GaussianSpec I;
    double N_E = 0.0;  // Stationary
    double N_I = 0.0;
    int root_index = 0;         // SteadyRoot, ascending in N_E
    double perturbation = 0.0;  // Stationary/SteadyRoot: density scaled by 1 + perturbation, R takes the rest

    bool operator==(const InitialSpec&) const = default;
};

enum class EntropyReference { None, Root };

struct BlowupThresholds {
    double N_cap = 1e4;
    double dt_floor = 1e-10;
    /// Bound on the self-excitatory drive b_EE N_E(t - D_EE) (one population: b N(t - D)).
    /// A mesh of finite resolution caps the rate a burst can reach far below N_cap, while
    /// this drive separates runaway excitation from bounded bursts.
    double self_drive_cap = 100.0;

    bool operator==(const BlowupThresholds&) const = default;
};

struct ClassificationSettings {
    double window = 0.3;       // trailing fraction of the run examined
    double flatness = 1e-3;    // STEADY when (max - min) / max(mean, eps) is below
    int min_peaks = 4;
    double spacing_cv = 0.05;  // PERIODIC peak-spacing coefficient of variation
    double amplitude_decay = 0.10;

    bool operator==(const ClassificationSettings&) const = default;
};

inline constexpr double kDefaultCflSafety = 0.8;

struct RunConfig {
    int populations = 1;
    OnePopParameters one;
    ModelParameters two;
    GridSpec grid;
    InitialSpec initial;
    double t_end = 5.0;
    double output_interval = 0.01;
    std::vector<double> snapshot_times;
    double cfl_safety = kDefaultCflSafety;
    double dt_bar = 0.0;  // 0: delay / 64 for each buffer
    BlowupThresholds blowup;
    EntropyReference entropy = EntropyReference::None;
    int entropy_root = 0;
    ClassificationSettings classify;
    bool concurrent = false;  // step the two populations on two threads

    bool operator==(const RunConfig&) const = default;
};

void validate_run_config(const RunConfig& cfg);
Grid make_grid(const RunConfig& cfg);

/// Densities and refractory contents at t = 0. Density mass is 1 - R; stationary
/// starts are rescaled to that mass before the perturbation is applied.
struct InitialCondition {
    DensityField rho_E;
    double R_E = 0.0;
    DensityField rho_I;  // empty for one population
    double R_I = 0.0;
    std::vector<std::string> notes;
};

InitialCondition make_initial_condition(const RunConfig& cfg, const Grid& grid);

struct Sample {
    double t = 0.0;
    double N_E = 0.0;
    double N_I = 0.0;  // NaN for one population
    double R_E = 0.0;
    double R_I = 0.0;
    double mass_E = 0.0;
    double mass_I = 0.0;
    double entropy = 0.0;  // NaN without a reference
};

struct Snapshot {
    double t = 0.0;
    std::vector<double> rho_E;
    std::vector<double> rho_I;  // empty for one population
};

struct TimeSeries {
    std::vector<Sample> samples;
    std::vector<Snapshot> snapshots;
    std::vector<double> v;  // mesh nodes shared by all snapshots
    /// Excitatory discharge int_0^t N_E ds at each sample, summed from the flux through
    /// V_F of every step. Empty for series not produced by a simulation.
    std::vector<double> discharged_E;
    std::optional<double> blowup_time;
    std::string blowup_trigger;
};

enum class OutcomeKind { Steady, Periodic, Blowup, Undetermined };
std::string to_string(OutcomeKind k);

struct OutcomeClassification {
    OutcomeKind kind = OutcomeKind::Undetermined;
    double t_star = 0.0;  // Blowup
    std::string trigger;  // Blowup: which threshold fired
    double period = 0.0;  // Periodic
    double amplitude = 0.0;
    int peaks = 0;
    double terminal_N = 0.0;
    double window_mean_N = 0.0;
    double cycle_mean_N = 0.0;  // Periodic: mean N_E over whole cycles, first to last peak
    double l1_to_reference = -1.0;  // Steady with reference; -1 when unavailable
};

struct RunCounters {
    std::size_t steps = 0;
    std::size_t negative_floor = 0;
    std::size_t rate_clamps = 0;
    std::size_t refractory_clamps = 0;
    double min_dt = 0.0;
    double max_dt = 0.0;
    double left_leak = 0.0;
    double floor_mass = 0.0;
    double peak_N = 0.0;  // largest rate seen at any step
    double peak_self_drive = 0.0;
};

struct SimulationResult {
    TimeSeries series;
    Snapshot final_state;
    OutcomeClassification outcome;
    RunCounters counters;
    std::optional<SteadyStateSolution> reference;
    std::vector<std::string> notes;
};

SimulationResult simulate_one_population(const RunConfig& cfg);
SimulationResult simulate_two_populations(const RunConfig& cfg);
SimulationResult simulate(const RunConfig& cfg);

/// Returns the name of the threshold that fired, if any.
std::optional<std::string> detect_blowup(double N_max, double dt_unclipped, bool finite,
                                         const BlowupThresholds& thr, double self_drive = 0.0);

/// E = int rho_inf G(rho / rho_inf) dv + R_inf G(R / R_inf), G(x) = (x - 1)^2, with the
/// integrand dropped where rho_inf < 1e-14.
double relative_entropy(const DensityField& rho, double R, const DensityField& rho_inf,
                        double R_inf, const Grid& grid);
/// Two populations: the sum of both terms.
double relative_entropy(const DensityField& rho_E, double R_E, const DensityField& rho_I,
                        double R_I, const SteadyStateSolution& ref, const Grid& grid);

/// Uses N_E (and N_I for two populations) over the trailing window. The distance to the
/// reference needs `grid` and the density at the end of the run.
OutcomeClassification classify_outcome(const TimeSeries& series,
                                       const ClassificationSettings& s = {},
                                       const std::optional<SteadyStateSolution>& reference = {},
                                       const Grid* grid = nullptr,
                                       const Snapshot* final_state = nullptr);

struct RefractoryComparison {
    SimulationResult ratio;
    SimulationResult delayed;
    double sup_gap_N = 0.0;  // over common sample times
    double sup_gap_R = 0.0;
    double terminal_N_gap = 0.0;  // relative, at t_end
    double limit_N_gap = 0.0;     // relative, between the limit_rate of both runs
    bool same_kind = false;
};

/// Rate a run settles to: the cycle mean for a periodic outcome, else the terminal N_E.
double limit_rate(const OutcomeClassification& o);

RefractoryComparison compare_refractory_modes(const RunConfig& cfg);

struct StabilityProbe {
    SteadyStateSolution root;
    SimulationResult run;
    /// Index of the root nearest to the terminal rate when the run settles.
    int settled_near = -1;
};

/// Starts from every steady state's profile (nudged by `perturbation`) and classifies
/// the resulting run. Uses cfg's parameters, grid and run settings.
std::vector<StabilityProbe> probe_stability(const RunConfig& cfg, double perturbation = 0.0);

}  // namespace nnlif
