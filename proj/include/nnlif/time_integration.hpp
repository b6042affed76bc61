#pragma once

// Lagged firing rates, the refractory compartment and the TVD-RK3 stepper for one
// population density.

#include <cstddef>
#include <limits>
#include <span>
#include <vector>

#include "nnlif/grid.hpp"
#include "nnlif/params.hpp"
#include "nnlif/spatial.hpp"

namespace nnlif {

inline constexpr int kDelaySlots = 64;

/// History of one firing rate sampled every dt_bar, read back by linear interpolation.
///
/// Samples live at the instants k * dt_bar and are produced by interpolating between
/// consecutive record() calls. Only the last M + 2 samples are kept, M = D / dt_bar.
/// Queries at or before t = 0 return the history value (0 unless configured otherwise).
/// With D = 0 the buffer degenerates to "latest recorded value".
class DelayBuffer {
public:
    explicit DelayBuffer(double delay, double dt_bar = 0.0, double history = 0.0);

    void record(double t, double N);
    double query(double t_query) const;
    /// Value seen by a reader at time t through this buffer's delay.
    double lagged(double t) const { return query(t - delay_); }

    double delay() const { return delay_; }
    double dt_bar() const { return dt_bar_; }
    std::size_t slots() const { return slots_; }
    double history() const { return history_; }
    bool empty() const { return !has_raw_; }
    double last_time() const { return t_raw_; }

private:
    double sample_time(long long k) const { return static_cast<double>(k) * dt_bar_; }
    double sample(long long k) const { return ring_[static_cast<std::size_t>(k) % ring_.size()]; }

    double delay_;
    double dt_bar_;
    double history_;
    std::size_t slots_;
    std::vector<double> ring_;
    long long first_k_ = 0;  // oldest sample index ever stored
    long long next_k_ = 0;   // index of the next sample instant
    bool has_raw_ = false;
    double t_raw_ = 0.0;
    double N_raw_ = 0.0;
};

/// dt = safety * min(dv / h_max, dv^2 / (2a)), further capped by dt_cap.
double cfl_timestep(double h_max, double a, double dv, double safety,
                    double dt_cap = std::numeric_limits<double>::infinity());

/// Scratch space for tvd_rk3_step; sized on first use.
struct Rk3Workspace {
    std::vector<double> stage;
    std::vector<double> rate;
};

/// Butcher weights of the three stages, used to average stage-wise boundary fluxes.
inline constexpr double kRk3StageWeights[3] = {1.0 / 6.0, 1.0 / 6.0, 2.0 / 3.0};

/// Shu-Osher TVD-RK3. `L(stage, u, du)` writes du/dt at u; it is called with
/// stage = 0, 1, 2 in order.
template <class Rhs>
void tvd_rk3_step(std::span<double> u, double dt, Rhs&& L, Rk3Workspace& ws) {
    const std::size_t n = u.size();
    ws.stage.resize(n);
    ws.rate.resize(n);
    auto& v = ws.stage;
    auto& k = ws.rate;

    L(0, std::span<const double>(u.data(), n), std::span<double>(k));
    for (std::size_t j = 0; j < n; ++j) v[j] = u[j] + dt * k[j];

    L(1, std::span<const double>(v), std::span<double>(k));
    for (std::size_t j = 0; j < n; ++j) v[j] = 0.75 * u[j] + 0.25 * (v[j] + dt * k[j]);

    L(2, std::span<const double>(v), std::span<double>(k));
    for (std::size_t j = 0; j < n; ++j) u[j] = (u[j] + 2.0 * (v[j] + dt * k[j])) / 3.0;
}

/// Refractory compartment of one population.
struct RefractoryState {
    RefractoryMode mode = RefractoryMode::Ratio;
    double R = 0.0;
    double tau = 0.025;
    /// Cumulative inflow C(t) = int_0^t N_in, read back at t - tau (Delayed mode only).
    DelayBuffer entered{0.0};
    double cumulative = 0.0;
    double initial_release = 0.0;  // R0 / tau, the release rate for t < tau
    std::size_t clamp_count = 0;

    RefractoryState() = default;
    /// In Delayed mode the compartment's initial content R0 leaves at the constant
    /// rate R0 / tau during [0, tau].
    RefractoryState(RefractoryMode mode, double R0, double tau, double dt_bar = 0.0);
};

inline constexpr double kRefractoryTolerance = 1e-6;

/// C(s) for s <= current time; for s < 0 the initial content counts as having entered
/// at the rate R0 / tau.
double cumulative_inflow(const RefractoryState& ref, double s);

/// Reset inflow over [t, t + dt]: R(t) / tau (Ratio); the mean rate that entered during
/// [t - tau, t + dt - tau], (C(t + dt - tau) - C(t - tau)) / dt (Delayed); 0 (None).
/// Delayed mode needs dt <= tau.
double reset_inflow(const RefractoryState& ref, double t, double dt);

struct RefractoryUpdate {
    double R_new = 0.0;
    double M_used = 0.0;
};

/// Explicit Euler R <- R + dt (N_in - M) with M = reset_inflow(ref, t, dt); in Delayed mode
/// C(t + dt) is recorded. R outside [0, 1] by more than the tolerance is clamped
/// and counted.
RefractoryUpdate refractory_update(RefractoryState& ref, double N_in, double dt, double t);

/// Result of advancing one population by one step.
struct StepReport {
    double outflow = 0.0;       // stage-averaged flux through V_F
    double left_outflow = 0.0;  // stage-averaged flux through the left end
    double M = 0.0;             // reset inflow deposited during the step
    double N = 0.0;             // firing rate read from the new density
    std::size_t negative_floor = 0;  // nodes left below -1e-10 after the step
    double floor_mass = 0.0;         // mass added by zeroing round-off negatives
    bool finite = true;
};

/// Owns one density, its refractory compartment and the RK3 scratch space.
class PopulationStepper {
public:
    PopulationStepper(const Grid& grid, DensityField rho0, RefractoryState refractory);

    /// Advances from t to t + dt with the drive frozen over the step.
    StepReport step(Drive drive, double t, double dt);

    const Grid& grid() const { return *grid_; }
    const DensityField& density() const { return rho_; }
    const RefractoryState& refractory() const { return ref_; }
    double R() const { return ref_.R; }
    double mass() const { return total_mass(rho_, *grid_); }
    /// Read-out -a d(rho)/dv at V_F for the given diffusion coefficient.
    double firing_rate(double a) const;
    std::size_t negative_floor_count() const { return negative_floor_total_; }
    std::size_t rate_clamp_count() const { return rate_clamps_; }
    double left_leak() const { return left_leak_; }
    double floor_mass() const { return floor_mass_; }

private:
    const Grid* grid_;
    DensityField rho_;
    RefractoryState ref_;
    Rk3Workspace ws_;
    std::size_t negative_floor_total_ = 0;
    mutable std::size_t rate_clamps_ = 0;
    double left_leak_ = 0.0;
    double floor_mass_ = 0.0;
};

}  // namespace nnlif
