#include "nnlif/network.hpp"

#include <algorithm>
#include <array>
#include <barrier>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <memory>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "nnlif/format.hpp"
#include "nnlif/quadrature.hpp"
#include "nnlif/spatial.hpp"
#include "nnlif/time_integration.hpp"

namespace nnlif {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kEntropyCutoff = 1e-14;
}  // namespace

std::string to_string(InitialKind k) {
    switch (k) {
        case InitialKind::Gaussian:
            return "gaussian";
        case InitialKind::Stationary:
            return "stationary";
        case InitialKind::SteadyRoot:
            return "steady_root";
    }
    return "?";
}

InitialKind initial_kind_from_string(const std::string& s) {
    if (s == "gaussian") return InitialKind::Gaussian;
    if (s == "stationary") return InitialKind::Stationary;
    if (s == "steady_root") return InitialKind::SteadyRoot;
    throw std::invalid_argument("unknown initial kind '" + s +
                                "' (expected gaussian, stationary or steady_root)");
}

std::string to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::Steady:
            return "STEADY";
        case OutcomeKind::Periodic:
            return "PERIODIC";
        case OutcomeKind::Blowup:
            return "BLOWUP";
        case OutcomeKind::Undetermined:
            return "UNDETERMINED";
    }
    return "?";
}

void validate_run_config(const RunConfig& cfg) {
    std::vector<std::string> bad;
    if (cfg.populations != 1 && cfg.populations != 2) bad.push_back("populations must be 1 or 2");
    if (!(cfg.t_end > 0.0)) bad.push_back("t_end must be > 0");
    if (!(cfg.output_interval > 0.0)) bad.push_back("output_interval must be > 0");
    if (!(cfg.cfl_safety > 0.0 && cfg.cfl_safety <= 1.0)) bad.push_back("cfl_safety must lie in (0, 1]");
    if (!(cfg.dt_bar >= 0.0)) bad.push_back("dt_bar must be >= 0");
    if (!(cfg.blowup.N_cap > 0.0)) bad.push_back("N_cap must be > 0");
    if (!(cfg.blowup.dt_floor >= 0.0)) bad.push_back("dt_floor must be >= 0");
    if (!(cfg.blowup.self_drive_cap > 0.0)) bad.push_back("self_drive_cap must be > 0");
    if (cfg.grid.n_cells < 8) bad.push_back("n_cells must be >= 8");
    for (double s : cfg.snapshot_times) {
        if (!(s >= 0.0 && s <= cfg.t_end)) {
            bad.push_back("snapshot time " + format_number(s) + " outside [0, t_end]");
        }
    }
    if (!(cfg.initial.perturbation > -1.0)) bad.push_back("perturbation must be > -1");
    if (cfg.initial.root_index < 0) bad.push_back("root_index must be >= 0");
    const auto& c = cfg.classify;
    if (!(c.window > 0.0 && c.window <= 1.0)) bad.push_back("classification window must lie in (0, 1]");
    if (c.min_peaks < 2) bad.push_back("min_peaks must be >= 2");
    if (!bad.empty()) throw ParameterError(bad);
    if (cfg.populations == 1) {
        validate_parameters(cfg.one);
    } else {
        validate_parameters(cfg.two);
    }
}

Grid make_grid(const RunConfig& cfg) {
    const double V_F = cfg.populations == 1 ? cfg.one.V_F : cfg.two.V_F;
    const double V_R = cfg.populations == 1 ? cfg.one.V_R : cfg.two.V_R;
    return Grid(V_F, V_R, cfg.grid.v_left, cfg.grid.n_cells);
}

std::optional<std::string> detect_blowup(double N_max, double dt_unclipped, bool finite,
                                         const BlowupThresholds& thr, double self_drive) {
    if (!finite || std::isnan(N_max)) return std::string("non-finite state");
    if (N_max > thr.N_cap) return std::string("N > N_cap");
    if (dt_unclipped < thr.dt_floor) return std::string("dt < dt_floor");
    if (self_drive > thr.self_drive_cap) return std::string("self drive > self_drive_cap");
    return std::nullopt;
}

double relative_entropy(const DensityField& rho, double R, const DensityField& rho_inf,
                        double R_inf, const Grid& grid) {
    if (!(R_inf > 0.0)) throw std::invalid_argument("relative_entropy: reference R_inf must be > 0");
    if (rho.size() != rho_inf.size() || rho.size() != grid.size())
        throw std::invalid_argument("relative_entropy: size mismatch");
    std::vector<double> integrand(rho.size(), 0.0);
    for (std::size_t j = 0; j < rho.size(); ++j) {
        if (rho_inf[j] < kEntropyCutoff) continue;
        const double d = rho[j] - rho_inf[j];
        integrand[j] = d * d / rho_inf[j];
    }
    const double dR = R - R_inf;
    return total_mass(integrand, grid) + dR * dR / R_inf;
}

double relative_entropy(const DensityField& rho_E, double R_E, const DensityField& rho_I,
                        double R_I, const SteadyStateSolution& ref, const Grid& grid) {
    return relative_entropy(rho_E, R_E, ref.profile_E, ref.R_E, grid) +
           relative_entropy(rho_I, R_I, ref.profile_I, ref.R_I, grid);
}

namespace {

struct Peaks {
    std::vector<double> times;
    std::vector<double> heights;
};

// Local maxima above the window midpoint, located by a parabola through three samples.
Peaks find_peaks(const std::vector<double>& t, const std::vector<double>& x) {
    Peaks p;
    if (x.size() < 3) return p;
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double mid = 0.5 * (*lo + *hi);
    for (std::size_t i = 1; i + 1 < x.size(); ++i) {
        if (!(x[i] > x[i - 1] && x[i] >= x[i + 1] && x[i] > mid)) continue;
        const double denom = x[i - 1] - 2.0 * x[i] + x[i + 1];
        double shift = 0.0;
        if (denom < 0.0) shift = std::clamp(0.5 * (x[i - 1] - x[i + 1]) / denom, -0.5, 0.5);
        const double h = shift >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
        p.times.push_back(t[i] + shift * h);
        p.heights.push_back(x[i] - 0.25 * (x[i - 1] - x[i + 1]) * shift);
    }
    return p;
}

double interpolate(const std::vector<double>& t, const std::vector<double>& x, double s) {
    const auto it = std::upper_bound(t.begin(), t.end(), s);
    if (it == t.begin()) return x.front();
    if (it == t.end()) return x.back();
    const std::size_t i = static_cast<std::size_t>(it - t.begin());
    const double w = (s - t[i - 1]) / (t[i] - t[i - 1]);
    return x[i - 1] + w * (x[i] - x[i - 1]);
}

// Trapezoidal mean of x over [a, b], interpolating linearly at both ends.
double cycle_mean(const std::vector<double>& t, const std::vector<double>& x, double a, double b) {
    auto at = [&](double s) { return interpolate(t, x, s); };
    double area = 0.0;
    double prev_t = a;
    double prev_x = at(a);
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] <= a) continue;
        if (t[i] >= b) break;
        area += 0.5 * (prev_x + x[i]) * (t[i] - prev_t);
        prev_t = t[i];
        prev_x = x[i];
    }
    area += 0.5 * (prev_x + at(b)) * (b - prev_t);
    return area / (b - a);
}

double relative_range(const std::vector<double>& x) {
    const auto [lo, hi] = std::minmax_element(x.begin(), x.end());
    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    return (*hi - *lo) / std::max(mean, 1e-12);
}

}  // namespace

OutcomeClassification classify_outcome(const TimeSeries& series, const ClassificationSettings& s,
                                       const std::optional<SteadyStateSolution>& reference,
                                       const Grid* grid, const Snapshot* final_state) {
    OutcomeClassification out;
    if (series.samples.empty()) return out;
    out.terminal_N = series.samples.back().N_E;
    if (series.blowup_time) {
        out.kind = OutcomeKind::Blowup;
        out.t_star = *series.blowup_time;
        out.trigger = series.blowup_trigger;
        return out;
    }

    const double t0 = series.samples.front().t;
    const double t1 = series.samples.back().t;
    const double start = t1 - s.window * (t1 - t0);
    std::vector<double> t, nE, nI, dis;
    const bool has_discharge = series.discharged_E.size() == series.samples.size();
    for (std::size_t k = 0; k < series.samples.size(); ++k) {
        const Sample& smp = series.samples[k];
        if (smp.t < start) continue;
        t.push_back(smp.t);
        nE.push_back(smp.N_E);
        nI.push_back(smp.N_I);
        if (has_discharge) dis.push_back(series.discharged_E[k]);
    }
    if (t.size() < 3) return out;
    const bool two = !std::isnan(nI.front());
    out.window_mean_N = std::accumulate(nE.begin(), nE.end(), 0.0) / static_cast<double>(nE.size());

    const double range_E = relative_range(nE);
    const double range_I = two ? relative_range(nI) : 0.0;
    if (range_E < s.flatness && range_I < s.flatness) {
        out.kind = OutcomeKind::Steady;
        if (reference && grid && final_state && !final_state->rho_E.empty()) {
            DensityField rho(final_state->rho_E);
            out.l1_to_reference = l1_distance(rho, reference->profile_E, *grid);
            if (two && !final_state->rho_I.empty()) {
                out.l1_to_reference += l1_distance(DensityField(final_state->rho_I),
                                                   reference->profile_I, *grid);
            }
        }
        return out;
    }

    // the population that oscillates most carries the rhythm
    const std::vector<double>& x = range_I > range_E ? nI : nE;
    const Peaks pk = find_peaks(t, x);
    out.peaks = static_cast<int>(pk.times.size());
    if (out.peaks < s.min_peaks) return out;

    std::vector<double> gaps(pk.times.size() - 1);
    for (std::size_t i = 0; i + 1 < pk.times.size(); ++i) gaps[i] = pk.times[i + 1] - pk.times[i];
    const double mean_gap = std::accumulate(gaps.begin(), gaps.end(), 0.0) / static_cast<double>(gaps.size());
    double var = 0.0;
    for (double g : gaps) var += (g - mean_gap) * (g - mean_gap);
    const double cv = std::sqrt(var / static_cast<double>(gaps.size())) / mean_gap;

    const double floor = *std::min_element(x.begin(), x.end());
    const double first = pk.heights.front() - floor;
    const double last = pk.heights.back() - floor;
    const double decay = first > 0.0 ? (first - last) / first : 1.0;
    if (cv < s.spacing_cv && decay <= s.amplitude_decay) {
        out.kind = OutcomeKind::Periodic;
        out.period = mean_gap;
        out.amplitude = 0.5 * (*std::max_element(x.begin(), x.end()) - floor);
        const double a = pk.times.front(), b = pk.times.back();
        // the discharge integral sees the spikes between samples; the trapezoid does not
        out.cycle_mean_N = has_discharge ? (interpolate(t, dis, b) - interpolate(t, dis, a)) / (b - a)
                                         : cycle_mean(t, nE, a, b);
    }
    return out;
}

namespace {

// Runs one task on a persistent worker thread in lockstep with the caller.
class LockstepWorker {
public:
    LockstepWorker() : sync_(2), thread_([this] { loop(); }) {}
    ~LockstepWorker() {
        stop_ = true;
        sync_.arrive_and_wait();
        thread_.join();
    }
    LockstepWorker(const LockstepWorker&) = delete;
    LockstepWorker& operator=(const LockstepWorker&) = delete;

    void run(const std::function<void()>& mine, const std::function<void()>& theirs) {
        task_ = &theirs;
        sync_.arrive_and_wait();
        std::exception_ptr local;
        try {
            mine();
        } catch (...) {
            local = std::current_exception();
        }
        sync_.arrive_and_wait();
        if (local) std::rethrow_exception(local);
        if (error_) std::rethrow_exception(std::exchange(error_, nullptr));
    }

private:
    void loop() {
        for (;;) {
            sync_.arrive_and_wait();
            if (stop_) return;
            try {
                (*task_)();
            } catch (...) {
                error_ = std::current_exception();
            }
            sync_.arrive_and_wait();
        }
    }

    std::barrier<> sync_;
    bool stop_ = false;
    const std::function<void()>* task_ = nullptr;
    std::exception_ptr error_;
    std::thread thread_;
};

struct Lane {
    PopulationStepper stepper;
    RefractoryMode mode;
    double tau = 0.0;
    Drive drive;
    double N = 0.0;
    StepReport report;
};

struct InitialState {
    DensityField rho;
    double R = 0.0;
};

double effective_tau(double tau, RefractoryMode mode) {
    return mode == RefractoryMode::None ? 0.0 : tau;
}

// Stationary profile at the given rates, scaled to carry 1 - R and then nudged.
InitialState stationary_start(DensityField profile, double R, double perturbation,
                              RefractoryMode mode, const Grid& grid) {
    const double m = total_mass(profile, grid);
    if (!(m > 0.0)) throw NumericalError("stationary start: profile carries no mass");
    const double scale = (1.0 - R) / m * (1.0 + perturbation);
    for (double& x : profile.raw()) x *= scale;
    if (perturbation != 0.0) {
        if (mode == RefractoryMode::None)
            throw std::invalid_argument("perturbation needs a refractory compartment to balance mass");
        R = 1.0 - total_mass(profile, grid);
        if (R < 0.0) throw std::invalid_argument("perturbation leaves a negative refractory content");
    }
    return {std::move(profile), R};
}

class Engine {
public:
    Engine(const RunConfig& cfg, SimulationResult& result)
        : cfg_(cfg), grid_(make_grid(cfg)), result_(result), two_(cfg.populations == 2) {}

    void run();

private:
    double mode_tau(int pop) const {
        if (!two_) return cfg_.one.tau;
        return cfg_.two.tau(pop == 0 ? Population::E : Population::I);
    }
    RefractoryMode mode() const { return two_ ? cfg_.two.refractory_mode : cfg_.one.refractory_mode; }
    double buffer_dt_bar(double delay) const {
        return cfg_.dt_bar > 0.0 ? std::min(cfg_.dt_bar, delay) : delay / kDelaySlots;
    }

    void build_lanes();
    void build_buffers();
    Drive drive_for(int pop, const std::array<double, 2>& lagged) const;
    std::array<double, 2> lagged_rates(int pop, double t, const std::array<double, 2>& now) const;
    void initial_rates();
    void record_rates(double t);
    void sample(double t);
    void snapshot(double t, Snapshot& into) const;

    const RunConfig& cfg_;
    Grid grid_;
    SimulationResult& result_;
    bool two_;
    std::vector<Lane> lanes_;
    // syn_[target][source]: the source's rate as seen by the target
    std::array<std::array<std::optional<DelayBuffer>, 2>, 2> syn_;
    double dt_cap_ = std::numeric_limits<double>::infinity();
    double discharged_E_ = 0.0;
};

void Engine::build_lanes() {
    const RefractoryMode m = mode();
    const int npop = two_ ? 2 : 1;
    InitialCondition ic = make_initial_condition(cfg_, grid_);
    for (auto& note : ic.notes) result_.notes.push_back(std::move(note));
    std::vector<InitialState> states;
    states.push_back({std::move(ic.rho_E), ic.R_E});
    if (two_) states.push_back({std::move(ic.rho_I), ic.R_I});

    for (int a = 0; a < npop; ++a) {
        const double tau = mode_tau(a);
        const double dt_bar = m == RefractoryMode::Delayed ? buffer_dt_bar(tau) : 0.0;
        RefractoryState ref(m, states[a].R, tau, dt_bar);
        if (m == RefractoryMode::Delayed) dt_cap_ = std::min(dt_cap_, 0.5 * ref.entered.dt_bar());
        lanes_.push_back(Lane{PopulationStepper(grid_, std::move(states[a].rho), std::move(ref)), m,
                              tau, Drive{}, 0.0, StepReport{}});
    }
}

void Engine::build_buffers() {
    auto make = [&](double D) {
        DelayBuffer b(D, D > 0.0 ? buffer_dt_bar(D) : 0.0);
        if (D > 0.0) dt_cap_ = std::min(dt_cap_, 0.5 * b.dt_bar());
        return b;
    };
    if (!two_) {
        syn_[0][0] = make(cfg_.one.D);
        return;
    }
    const auto& p = cfg_.two;
    syn_[0][0] = make(p.D_EE);
    syn_[0][1] = make(p.D_IE);
    syn_[1][0] = make(p.D_EI);
    syn_[1][1] = make(p.D_II);
}

Drive Engine::drive_for(int pop, const std::array<double, 2>& lagged) const {
    if (!two_) return drive(cfg_.one, lagged[0]);
    return drive(cfg_.two, pop == 0 ? Population::E : Population::I, lagged[0], lagged[1]);
}

std::array<double, 2> Engine::lagged_rates(int pop, double t, const std::array<double, 2>& now) const {
    std::array<double, 2> out{0.0, 0.0};
    const int npop = two_ ? 2 : 1;
    for (int src = 0; src < npop; ++src) {
        const DelayBuffer& b = *syn_[pop][src];
        out[src] = (b.delay() == 0.0 && b.empty()) ? now[src] : b.lagged(t);
    }
    return out;
}

// Rates at t = 0 are -a d(rho)/dv with a itself depending on the undelayed rates.
void Engine::initial_rates() {
    std::array<double, 2> N{0.0, 0.0};
    for (int it = 0; it < 50; ++it) {
        std::array<double, 2> next = N;
        for (std::size_t a = 0; a < lanes_.size(); ++a) {
            const Drive d = drive_for(static_cast<int>(a), lagged_rates(static_cast<int>(a), 0.0, N));
            next[a] = extract_firing_rate(lanes_[a].stepper.density().values(), d.a, grid_);
        }
        const bool settled = next == N;
        N = next;
        if (settled) break;
    }
    for (std::size_t a = 0; a < lanes_.size(); ++a) lanes_[a].N = N[a];
}

void Engine::record_rates(double t) {
    for (auto& row : syn_) {
        for (std::size_t src = 0; src < row.size(); ++src) {
            if (row[src]) row[src]->record(t, lanes_[src].N);
        }
    }
}

void Engine::snapshot(double t, Snapshot& into) const {
    into.t = t;
    into.rho_E = lanes_[0].stepper.density().raw();
    into.rho_I = two_ ? lanes_[1].stepper.density().raw() : std::vector<double>{};
}

void Engine::sample(double t) {
    Sample s;
    s.t = t;
    s.N_E = lanes_[0].N;
    s.R_E = lanes_[0].stepper.R();
    s.mass_E = lanes_[0].stepper.mass();
    if (two_) {
        s.N_I = lanes_[1].N;
        s.R_I = lanes_[1].stepper.R();
        s.mass_I = lanes_[1].stepper.mass();
    } else {
        s.N_I = s.R_I = s.mass_I = kNaN;
    }
    s.entropy = kNaN;
    if (result_.reference) {
        const auto& ref = *result_.reference;
        s.entropy = two_ ? relative_entropy(lanes_[0].stepper.density(), s.R_E,
                                            lanes_[1].stepper.density(), s.R_I, ref, grid_)
                         : relative_entropy(lanes_[0].stepper.density(), s.R_E, ref.profile_E,
                                            ref.R_E, grid_);
    }
    auto& samples = result_.series.samples;
    auto& dis = result_.series.discharged_E;
    if (!samples.empty() && samples.back().t == t) {
        samples.back() = s;
        dis.back() = discharged_E_;
    } else {
        samples.push_back(s);
        dis.push_back(discharged_E_);
    }
}

void Engine::run() {
    validate_run_config(cfg_);
    if (cfg_.entropy == EntropyReference::Root) {
        SteadyStates ss = two_ ? find_steady_states(cfg_.two, kDefaultScanPoints, grid_)
                               : find_steady_states(cfg_.one, kDefaultScanPoints, grid_);
        if (cfg_.entropy_root >= static_cast<int>(ss.roots.size()))
            throw std::invalid_argument("entropy_root out of range");
        result_.reference = ss.roots[cfg_.entropy_root];
    }
    build_lanes();
    build_buffers();
    initial_rates();
    record_rates(0.0);

    auto& series = result_.series;
    series.v.resize(grid_.size());
    for (std::size_t j = 0; j < grid_.size(); ++j) series.v[j] = grid_.v(j);

    std::vector<double> snaps = cfg_.snapshot_times;
    std::sort(snaps.begin(), snaps.end());
    snaps.erase(std::unique(snaps.begin(), snaps.end()), snaps.end());
    std::size_t next_snap = 0;
    auto take_snapshots = [&](double t) {
        while (next_snap < snaps.size() && snaps[next_snap] <= t) {
            Snapshot sn;
            snapshot(t, sn);
            series.snapshots.push_back(std::move(sn));
            ++next_snap;
        }
    };

    const double t_end = cfg_.t_end;
    long long k_out = 1;
    auto output_time = [&](long long k) {
        return std::min(static_cast<double>(k) * cfg_.output_interval, t_end);
    };
    double t = 0.0;
    sample(t);
    take_snapshots(t);

    std::unique_ptr<LockstepWorker> worker;
    if (two_ && cfg_.concurrent) worker = std::make_unique<LockstepWorker>();

    auto& ctr = result_.counters;
    ctr.min_dt = std::numeric_limits<double>::infinity();
    const double dv = grid_.dv();
    std::optional<std::string> fired;
    std::array<double, 2> now{};

    while (t < t_end) {
        for (std::size_t a = 0; a < lanes_.size(); ++a) now[a] = lanes_[a].N;
        double dt_raw = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < lanes_.size(); ++a) {
            Lane& L = lanes_[a];
            L.drive = drive_for(static_cast<int>(a), lagged_rates(static_cast<int>(a), t, now));
            dt_raw = std::min(dt_raw, cfl_timestep(max_abs_drift(L.drive.V0, grid_), L.drive.a, dv,
                                                   cfg_.cfl_safety, dt_cap_));
        }
        const double self_drive = (two_ ? cfg_.two.b_EE : cfg_.one.b) * lagged_rates(0, t, now)[0];
        ctr.peak_self_drive = std::max(ctr.peak_self_drive, self_drive);
        if ((fired = detect_blowup(0.0, dt_raw, std::isfinite(dt_raw), cfg_.blowup, self_drive))) break;

        double next_event = output_time(k_out);
        if (next_snap < snaps.size()) next_event = std::min(next_event, snaps[next_snap]);
        double dt = dt_raw;
        double t_new = t + dt;
        if (t_new >= next_event) {
            dt = next_event - t;
            t_new = next_event;
        } else if (t + 2.0 * dt_raw > next_event) {
            dt = 0.5 * (next_event - t);
            t_new = t + dt;
        }

        auto step_lane = [&, t, dt](std::size_t a) {
            Lane& L = lanes_[a];
            L.report = L.stepper.step(L.drive, t, dt);
        };
        if (worker) {
            worker->run([&] { step_lane(0); }, [&] { step_lane(1); });
        } else {
            for (std::size_t a = 0; a < lanes_.size(); ++a) step_lane(a);
        }

        t = t_new;
        discharged_E_ += lanes_[0].report.outflow * dt;
        ++ctr.steps;
        ctr.min_dt = std::min(ctr.min_dt, dt_raw);
        ctr.max_dt = std::max(ctr.max_dt, dt_raw);
        bool finite = true;
        double N_max = 0.0;
        for (auto& L : lanes_) {
            L.N = L.report.N;
            finite = finite && L.report.finite && std::isfinite(L.N);
            N_max = std::max(N_max, L.N);
        }
        ctr.peak_N = std::max(ctr.peak_N, N_max);
        if ((fired = detect_blowup(N_max, dt_raw, finite, cfg_.blowup))) break;
        record_rates(t);
        if (t == output_time(k_out)) {
            sample(t);
            ++k_out;
        }
        take_snapshots(t);
    }

    if (fired) {
        series.blowup_time = t;
        series.blowup_trigger = *fired;
        sample(t);
    }
    snapshot(t, result_.final_state);
    for (const auto& L : lanes_) {
        ctr.negative_floor += L.stepper.negative_floor_count();
        ctr.rate_clamps += L.stepper.rate_clamp_count();
        ctr.refractory_clamps += L.stepper.refractory().clamp_count;
        ctr.left_leak += L.stepper.left_leak();
        ctr.floor_mass += L.stepper.floor_mass();
    }
    if (ctr.steps == 0) ctr.min_dt = 0.0;
    result_.outcome = classify_outcome(series, cfg_.classify, result_.reference, &grid_,
                                       &result_.final_state);
}

}  // namespace

SimulationResult simulate_one_population(const RunConfig& cfg) {
    if (cfg.populations != 1) throw std::invalid_argument("simulate_one_population: populations must be 1");
    SimulationResult result;
    Engine(cfg, result).run();
    return result;
}

SimulationResult simulate_two_populations(const RunConfig& cfg) {
    if (cfg.populations != 2) throw std::invalid_argument("simulate_two_populations: populations must be 2");
    SimulationResult result;
    Engine(cfg, result).run();
    return result;
}

SimulationResult simulate(const RunConfig& cfg) {
    return cfg.populations == 2 ? simulate_two_populations(cfg) : simulate_one_population(cfg);
}

namespace {

RunConfig with_mode(RunConfig cfg, RefractoryMode m) {
    cfg.one.refractory_mode = m;
    cfg.two.refractory_mode = m;
    return cfg;
}

}  // namespace

InitialCondition make_initial_condition(const RunConfig& cfg, const Grid& grid) {
    const bool two = cfg.populations == 2;
    const RefractoryMode m = two ? cfg.two.refractory_mode : cfg.one.refractory_mode;
    auto tau_of = [&](int a) {
        if (!two) return cfg.one.tau;
        return cfg.two.tau(a == 0 ? Population::E : Population::I);
    };
    const auto& init = cfg.initial;
    const int npop = two ? 2 : 1;
    InitialCondition out;
    std::vector<InitialState> states;

    if (init.kind == InitialKind::Gaussian) {
        for (int a = 0; a < npop; ++a) {
            const GaussianSpec& g = a == 0 ? init.E : init.I;
            if (m == RefractoryMode::None && g.R0 != 0.0)
                throw std::invalid_argument("R0 must be 0 without a refractory state");
            states.push_back({gaussian_initial(grid, g.v0, g.sigma, 1.0 - g.R0), g.R0});
        }
    } else {
        double N_E = init.N_E;
        double N_I = init.N_I;
        if (init.kind == InitialKind::SteadyRoot) {
            SteadyStates ss = two ? find_steady_states(cfg.two, kDefaultScanPoints, grid)
                                  : find_steady_states(cfg.one, kDefaultScanPoints, grid);
            if (init.root_index >= static_cast<int>(ss.roots.size())) {
                throw std::invalid_argument("root_index " + std::to_string(init.root_index) +
                                            " but only " + std::to_string(ss.roots.size()) +
                                            " steady state(s) exist");
            }
            N_E = ss.roots[init.root_index].N_E;
            N_I = ss.roots[init.root_index].N_I;
            out.notes.push_back("initial profile at steady state " + std::to_string(init.root_index));
        }
        for (int a = 0; a < npop; ++a) {
            const double N = a == 0 ? N_E : N_I;
            const double R = effective_tau(tau_of(a), m) * N;
            DensityField profile =
                two ? stationary_initial(grid, N_E, N_I, cfg.two, a == 0 ? Population::E : Population::I)
                    : stationary_initial(grid, N_E, cfg.one);
            states.push_back(stationary_start(std::move(profile), R, init.perturbation, m, grid));
        }
        out.notes.push_back("stationary start rescaled so that mass + R = 1");
    }
    out.rho_E = std::move(states[0].rho);
    out.R_E = states[0].R;
    if (two) {
        out.rho_I = std::move(states[1].rho);
        out.R_I = states[1].R;
    }
    return out;
}

double limit_rate(const OutcomeClassification& o) {
    return o.kind == OutcomeKind::Periodic ? o.cycle_mean_N : o.terminal_N;
}

RefractoryComparison compare_refractory_modes(const RunConfig& cfg) {
    RefractoryComparison cmp;
    cmp.ratio = simulate(with_mode(cfg, RefractoryMode::Ratio));
    cmp.delayed = simulate(with_mode(cfg, RefractoryMode::Delayed));
    const auto& a = cmp.ratio.series.samples;
    const auto& b = cmp.delayed.series.samples;
    const std::size_t n = std::min(a.size(), b.size());
    for (std::size_t i = 0; i < n && a[i].t == b[i].t; ++i) {
        cmp.sup_gap_N = std::max(cmp.sup_gap_N, std::abs(a[i].N_E - b[i].N_E));
        cmp.sup_gap_R = std::max(cmp.sup_gap_R, std::abs(a[i].R_E - b[i].R_E));
        if (cfg.populations == 2) {
            cmp.sup_gap_N = std::max(cmp.sup_gap_N, std::abs(a[i].N_I - b[i].N_I));
            cmp.sup_gap_R = std::max(cmp.sup_gap_R, std::abs(a[i].R_I - b[i].R_I));
        }
    }
    const double Na = cmp.ratio.outcome.terminal_N;
    const double Nb = cmp.delayed.outcome.terminal_N;
    cmp.terminal_N_gap = std::abs(Na - Nb) / std::max(std::abs(Na), 1e-12);
    const double La = limit_rate(cmp.ratio.outcome);
    const double Lb = limit_rate(cmp.delayed.outcome);
    cmp.limit_N_gap = std::abs(La - Lb) / std::max(std::abs(La), 1e-12);
    cmp.same_kind = cmp.ratio.outcome.kind == cmp.delayed.outcome.kind;
    return cmp;
}

std::vector<StabilityProbe> probe_stability(const RunConfig& cfg, double perturbation) {
    validate_run_config(cfg);
    const Grid grid = make_grid(cfg);
    SteadyStates ss = cfg.populations == 2 ? find_steady_states(cfg.two, kDefaultScanPoints, grid)
                                           : find_steady_states(cfg.one, kDefaultScanPoints, grid);
    std::vector<StabilityProbe> probes;
    for (std::size_t i = 0; i < ss.roots.size(); ++i) {
        RunConfig c = cfg;
        c.initial.kind = InitialKind::SteadyRoot;
        c.initial.root_index = static_cast<int>(i);
        c.initial.perturbation = perturbation;
        StabilityProbe probe{ss.roots[i], simulate(c), -1};
        if (probe.run.outcome.kind == OutcomeKind::Steady) {
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t k = 0; k < ss.roots.size(); ++k) {
                const double d = std::abs(probe.run.outcome.terminal_N - ss.roots[k].N_E);
                if (d < best) {
                    best = d;
                    probe.settled_near = static_cast<int>(k);
                }
            }
        }
        probes.push_back(std::move(probe));
    }
    return probes;
}

}  // namespace nnlif
