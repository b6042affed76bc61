#include "nnlif/time_integration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nnlif {

DelayBuffer::DelayBuffer(double delay, double dt_bar, double history)
    : delay_(delay), dt_bar_(dt_bar), history_(history), slots_(0) {
    if (!(delay >= 0.0) || !std::isfinite(delay))
        throw std::invalid_argument("delay buffer: delay must be finite and >= 0");
    if (delay == 0.0) {
        dt_bar_ = 0.0;
        return;
    }
    if (dt_bar_ <= 0.0) dt_bar_ = delay / kDelaySlots;
    const double ratio = delay / dt_bar_;
    slots_ = static_cast<std::size_t>(std::max(1.0, std::round(ratio)));
    // a ring of M + 2 samples always brackets t - D from the newest raw point
    ring_.assign(std::max<std::size_t>(slots_, static_cast<std::size_t>(std::ceil(ratio))) + 2,
                 0.0);
}

void DelayBuffer::record(double t, double N) {
    if (has_raw_ && t < t_raw_) throw std::invalid_argument("delay buffer: time moved backwards");
    if (delay_ == 0.0) {
        has_raw_ = true;
        t_raw_ = t;
        N_raw_ = N;
        return;
    }
    if (!has_raw_) {
        next_k_ = static_cast<long long>(std::ceil(t / dt_bar_));
        first_k_ = next_k_;
        if (sample_time(next_k_) == t) {
            ring_[static_cast<std::size_t>(next_k_) % ring_.size()] = N;
            ++next_k_;
        }
    } else if (t == t_raw_) {
        if (next_k_ > first_k_ && sample_time(next_k_ - 1) == t)
            ring_[static_cast<std::size_t>(next_k_ - 1) % ring_.size()] = N;
    } else {
        const double span = t - t_raw_;
        while (sample_time(next_k_) <= t) {
            const double w = (sample_time(next_k_) - t_raw_) / span;
            ring_[static_cast<std::size_t>(next_k_) % ring_.size()] = N_raw_ + w * (N - N_raw_);
            ++next_k_;
        }
    }
    has_raw_ = true;
    t_raw_ = t;
    N_raw_ = N;
}

double DelayBuffer::query(double t_query) const {
    if (delay_ == 0.0) {
        if (!has_raw_) return history_;
        if (t_query < t_raw_) throw std::out_of_range("delay window exceeded");
        return N_raw_;
    }
    if (t_query <= 0.0 || !has_raw_) return history_;
    if (t_query > t_raw_) throw std::out_of_range("delay buffer: query ahead of the last record");
    if (next_k_ == first_k_) return history_;

    const long long last = next_k_ - 1;
    const double t_last = sample_time(last);
    if (t_query >= t_last) {
        if (t_raw_ == t_last) return sample(last);
        const double w = (t_query - t_last) / (t_raw_ - t_last);
        return sample(last) + w * (N_raw_ - sample(last));
    }
    if (t_query < sample_time(first_k_)) return history_;
    const long long oldest = std::max(first_k_, next_k_ - static_cast<long long>(ring_.size()));
    auto k = static_cast<long long>(std::floor(t_query / dt_bar_));
    k = std::clamp(k, first_k_, last - 1);
    if (k < oldest) throw std::out_of_range("delay window exceeded");
    const double t0 = sample_time(k);
    const double w = (t_query - t0) / (sample_time(k + 1) - t0);
    return sample(k) + w * (sample(k + 1) - sample(k));
}

double cfl_timestep(double h_max, double a, double dv, double safety, double dt_cap) {
    const double advective = h_max > 0.0 ? dv / h_max : std::numeric_limits<double>::infinity();
    const double diffusive = dv * dv / (2.0 * a);
    return std::min(safety * std::min(advective, diffusive), dt_cap);
}

RefractoryState::RefractoryState(RefractoryMode mode_, double R0, double tau_, double dt_bar)
    : mode(mode_), R(R0), tau(tau_), entered(0.0) {
    if (!(R0 >= 0.0 && R0 <= 1.0)) throw std::invalid_argument("refractory: R0 must lie in [0, 1]");
    if (mode == RefractoryMode::None) {
        if (R0 != 0.0) throw std::invalid_argument("refractory: R0 must be 0 without a refractory state");
        return;
    }
    if (!(tau > 0.0)) throw std::invalid_argument("refractory: tau must be > 0");
    if (mode == RefractoryMode::Delayed) {
        entered = DelayBuffer(tau, dt_bar);
        entered.record(0.0, 0.0);
        initial_release = R0 / tau;
    }
}

double cumulative_inflow(const RefractoryState& ref, double s) {
    if (s <= 0.0) return s * ref.initial_release;
    return ref.entered.query(s);
}

double reset_inflow(const RefractoryState& ref, double t, double dt) {
    switch (ref.mode) {
        case RefractoryMode::Ratio:
            return ref.R / ref.tau;
        case RefractoryMode::Delayed:
            if (!(dt > 0.0 && dt <= ref.tau))
                throw std::invalid_argument("reset_inflow: delayed mode needs 0 < dt <= tau");
            return (cumulative_inflow(ref, t + dt - ref.tau) - cumulative_inflow(ref, t - ref.tau)) / dt;
        case RefractoryMode::None:
            return 0.0;
    }
    return 0.0;
}

RefractoryUpdate refractory_update(RefractoryState& ref, double N_in, double dt, double t) {
    if (!(dt > 0.0)) throw std::invalid_argument("refractory_update: dt must be > 0");
    if (ref.mode == RefractoryMode::None) return {0.0, N_in};
    const double M = reset_inflow(ref, t, dt);
    double R = ref.R + dt * (N_in - M);
    if (R < -kRefractoryTolerance || R > 1.0 + kRefractoryTolerance) {
        ++ref.clamp_count;
        R = std::clamp(R, 0.0, 1.0);
    }
    ref.R = R;
    if (ref.mode == RefractoryMode::Delayed) {
        ref.cumulative += dt * N_in;
        ref.entered.record(t + dt, ref.cumulative);
    }
    return {R, M};
}

PopulationStepper::PopulationStepper(const Grid& grid, DensityField rho0, RefractoryState refractory)
    : grid_(&grid), rho_(std::move(rho0)), ref_(std::move(refractory)) {
    if (rho_.size() != grid.size()) throw std::invalid_argument("stepper: density/grid size mismatch");
}

double PopulationStepper::firing_rate(double a) const {
    return extract_firing_rate(rho_.values(), a, *grid_, &rate_clamps_);
}

namespace {
// Undershoots below this are left in place (and counted) so that mass is not created.
constexpr double kNegativeNoise = 1e-10;
}

StepReport PopulationStepper::step(Drive drive, double t, double dt) {
    StepReport rep;
    const bool reinject = ref_.mode == RefractoryMode::None;
    const double M = reinject ? 0.0 : reset_inflow(ref_, t, dt);
    double outflow = 0.0;
    double left = 0.0;
    double reinjected = 0.0;
    const Grid& grid = *grid_;

    tvd_rk3_step(
        rho_.raw(), dt,
        [&](int stage, std::span<const double> u, std::span<double> du) {
            SpatialOperatorInput in{u, drive, M, &grid};
            const BoundaryFlux f = assemble_rhs(in, du);
            const double w = kRk3StageWeights[stage];
            outflow += w * f.right;
            left += w * f.left;
            if (reinject) {
                deposit_reset(du, f.right, grid);
                reinjected += w * f.right;
            }
        },
        ws_);

    auto& rho = rho_.raw();
    rho.back() = 0.0;
    double removed = 0.0;
    for (double& x : rho) {
        if (!std::isfinite(x)) rep.finite = false;
        if (x < -kNegativeNoise) {
            ++rep.negative_floor;
        } else if (x < 0.0) {
            removed -= x;
            x = 0.0;
        }
    }
    rep.floor_mass = removed * grid.dv();
    floor_mass_ += rep.floor_mass;
    negative_floor_total_ += rep.negative_floor;
    left_leak_ += dt * left;

    if (reinject) {
        rep.M = reinjected;
    } else {
        rep.M = refractory_update(ref_, outflow, dt, t).M_used;
    }
    rep.outflow = outflow;
    rep.left_outflow = left;
    rep.N = firing_rate(drive.a);
    if (!std::isfinite(outflow) || !std::isfinite(ref_.R)) rep.finite = false;
    return rep;
}

}  // namespace nnlif
