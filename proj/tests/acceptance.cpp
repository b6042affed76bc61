// Acceptance checks, one per criterion. Usage: acceptance [criterion ...]
// Prints one PASS/FAIL line per criterion and exits non-zero if any failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nnlif/experiments.hpp"
#include "nnlif/network.hpp"
#include "nnlif/output.hpp"
#include "nnlif/presets.hpp"
#include "nnlif/spatial.hpp"
#include "nnlif/steady_state.hpp"
#include "nnlif/time_integration.hpp"

using namespace nnlif;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets, fixed here rather than read from anywhere.
constexpr double kSteadyN = 3.669;
constexpr double kSteadyNTol = 0.05;
constexpr double kSteadySeconds = 1.0;
constexpr double kSweepSeconds = 30.0;
constexpr double kDualFormRelTol = 1e-6;
constexpr int kRandomPoints = 100;
constexpr double kStationaryL1 = 1e-2;
constexpr double kStationaryRateRel = 0.02;
constexpr double kConservationTol = 1e-3;
constexpr double kBlowupTStar = 5.0;
constexpr double kRunSeconds = 60.0;
constexpr double kEntropyStepTol = 1e-6;
constexpr double kRefractoryGap = 0.02;
constexpr double kWenoOrder = 4.5;
constexpr double kDiffusionOrder = 1.9;
constexpr double kRk3Order = 2.9;
constexpr int kDeterminismRepeats = 3;
constexpr double kDeterminismHorizon = 0.5;

struct Verdict {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what + (ok ? "" : " [failed]");
        pass = pass && ok;
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

const ExperimentConfig& panel(const std::string& preset, const std::string& name) {
    return find_panel(*find_preset(preset), name).config;
}

SimulationResult timed_run(const RunConfig& cfg, double& secs) {
    const auto t0 = std::chrono::steady_clock::now();
    SimulationResult r = simulate(cfg);
    secs = seconds_since(t0);
    return r;
}

ModelParameters random_parameters(std::mt19937& rng) {
    std::uniform_real_distribution<double> b(0.05, 4.0), tau(0.05, 0.5), d(0.5, 2.0);
    ModelParameters p;
    p.b_EE = b(rng);
    p.b_IE = b(rng);
    p.b_II = b(rng);
    p.b_EI = b(rng);
    p.d_E = d(rng);
    p.d_I = d(rng);
    p.tau_E = tau(rng);
    p.tau_I = tau(rng);
    return p;
}

double worst_conservation(const SimulationResult& r, bool two) {
    double worst = 0.0;
    for (const Sample& s : r.series.samples) {
        worst = std::max(worst, std::abs(s.mass_E + s.R_E - 1.0));
        if (two) worst = std::max(worst, std::abs(s.mass_I + s.R_I - 1.0));
    }
    return worst;
}

// 1 ---------------------------------------------------------------------------
Verdict steady_state_value() {
    OnePopParameters p;
    p.b = -4.0;
    p.nu_ext = 20.0;
    p.tau = 0.025;
    const auto t0 = std::chrono::steady_clock::now();
    const SteadyStates s = find_steady_states(p);
    const double secs = seconds_since(t0);
    Verdict v;
    v.require(s.roots.size() == 1, fmt("%zu root(s)", s.roots.size()));
    if (!s.roots.empty()) {
        const double N = s.roots[0].N_E;
        v.require(std::abs(N - kSteadyN) <= kSteadyNTol, fmt("N = %.6f, |N - %.3f| <= %.2f", N, kSteadyN, kSteadyNTol));
    }
    v.require(secs < kSteadySeconds, fmt("%.3f s < %.0f s", secs, kSteadySeconds));
    return v;
}

// 2 ---------------------------------------------------------------------------
Verdict steady_state_count() {
    const ExperimentConfig& c = panel("est_eq_EI1", "steady");
    Verdict v;
    const auto s = find_steady_states(c.run.two);
    v.require(s.roots.size() == 3, fmt("%zu roots at b_EE = 3", s.roots.size()));

    const ExperimentConfig& sw = panel("bif_EI", "b_EE");
    const auto t0 = std::chrono::steady_clock::now();
    const auto scan = bifurcation_scan(sw.run.two, "b_EE", sw.sweep.values, sw.scan_points);
    const double secs = seconds_since(t0);
    v.require(scan.points.size() == 20 && scan.points.front().value == 0.5,
              fmt("%zu-point sweep from b_EE = %.2f", scan.points.size(), scan.points.front().value));
    v.require(scan.points.front().roots_NE.size() == 1,
              fmt("%zu root(s) at b_EE = 0.5", scan.points.front().roots_NE.size()));
    v.require(secs < kSweepSeconds, fmt("sweep %.1f s < %.0f s", secs, kSweepSeconds));
    return v;
}

// 3 ---------------------------------------------------------------------------
Verdict dual_form_and_parity() {
    Verdict v;
    std::mt19937 rng(20240501);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    double worst = 0.0;
    int rejected = 0, both_infinite = 0;
    for (int k = 0; k < kRandomPoints;) {
        const ModelParameters p = random_parameters(rng);
        const double N_E = unit(rng) / p.tau_E;
        const double N_I = unit(rng) / p.tau_I;
        const Population pop = k % 2 ? Population::I : Population::E;
        const double slow = integral_I_bruteforce(N_E, N_I, p, pop);
        const double fast = integral_I(N_E, N_I, p, pop);
        // a point whose I overflows (rate effectively 0) is not admissible; both routes must agree on it
        if (!std::isfinite(slow)) {
            ++rejected;
            both_infinite += std::isinf(fast);
            continue;
        }
        const double gap = std::abs(fast - slow) / std::abs(slow);
        worst = std::isfinite(gap) ? std::max(worst, gap) : gap;
        ++k;
    }
    v.require(worst <= kDualFormRelTol, fmt("max relative gap %.2e over %d points", worst, kRandomPoints));
    v.require(both_infinite == rejected,
              fmt("%d/%d overflowing draws infinite in both routes", both_infinite, rejected));

    // parity, and the count itself against a dense independent ladder
    constexpr int kDense = 2000;
    int odd = 0, tangent = 0, recount_mismatch = 0;
    for (int k = 0; k < kRandomPoints; ++k) {
        const ModelParameters p = random_parameters(rng);
        const auto s = find_steady_states(p);
        if (s.tangency_warning) {
            ++tangent;
            continue;
        }
        odd += s.roots.size() % 2 == 1;
        int changes = 0;
        double prev = F_of_NE(0.0, p) - 1.0;
        for (int j = 1; j <= kDense; ++j) {
            const double g = F_of_NE(j * (1.0 / p.tau_E) / kDense, p) - 1.0;
            changes += (g > 0.0) != (prev > 0.0);
            prev = g;
        }
        recount_mismatch += changes != static_cast<int>(s.roots.size());
    }
    const int checked = kRandomPoints - tangent;
    v.require(odd == checked, fmt("odd root count on %d/%d draws (%d tangency warnings)", odd, checked, tangent));
    v.require(recount_mismatch == 0, fmt("%d draws disagree with a %d-point recount", recount_mismatch, kDense));
    return v;
}

// 4 ---------------------------------------------------------------------------
Verdict stationarity_residual() {
    RunConfig c;
    c.one.b = -4.0;
    c.one.nu_ext = 20.0;
    c.one.D = 0.0;
    c.one.refractory_mode = RefractoryMode::Ratio;
    c.initial.kind = InitialKind::SteadyRoot;
    c.t_end = 1.0;
    c.snapshot_times = {0.0};
    const Grid grid = make_grid(c);
    const double N_inf = find_steady_states(c.one, kDefaultScanPoints, grid).roots.at(0).N_E;
    const auto r = simulate(c);
    const DensityField rho0(r.series.snapshots.at(0).rho_E);
    const DensityField rho1(r.final_state.rho_E);
    const double l1 = l1_distance(rho1, rho0, grid);
    const double N1 = r.series.samples.back().N_E;
    Verdict v;
    v.require(l1 <= kStationaryL1, fmt("||rho(1) - rho(0)||_1 = %.3e <= %.0e", l1, kStationaryL1));
    v.require(std::abs(N1 - N_inf) / N_inf <= kStationaryRateRel,
              fmt("N(1) = %.5f vs N_inf = %.5f, relative %.2e <= %.2f", N1, N_inf,
                  std::abs(N1 - N_inf) / N_inf, kStationaryRateRel));
    return v;
}

// 5 ---------------------------------------------------------------------------
Verdict conservation() {
    Verdict v;
    double worst = 0.0;
    int runs = 0, skipped = 0;
    std::string worst_at;
    auto check = [&](const SimulationResult& r, const RunConfig& c, const std::string& label) {
        if (r.outcome.kind == OutcomeKind::Blowup) {
            ++skipped;
            return;
        }
        ++runs;
        const double e = worst_conservation(r, c.populations == 2);
        if (e >= worst) {
            worst = e;
            worst_at = label;
        }
        std::printf("    %-36s %-12s max |mass + R - 1| = %.2e\n", label.c_str(),
                    to_string(r.outcome.kind).c_str(), e);
        std::fflush(stdout);
    };
    for (const auto& p : presets()) {
        for (const auto& pn : p.panels) {
            const std::string label = p.id + "/" + pn.name;
            const RunConfig& c = pn.config.run;
            switch (pn.action) {
                case Action::Simulate: check(simulate(c), c, label); break;
                case Action::Stability: {
                    const auto probes = probe_stability(c, c.initial.perturbation);
                    for (std::size_t i = 0; i < probes.size(); ++i)
                        check(probes[i].run, c, label + "/root_" + std::to_string(i));
                    break;
                }
                case Action::CompareRefractory: {
                    const auto cmp = compare_refractory_modes(c);
                    check(cmp.ratio, c, label + "/ratio");
                    check(cmp.delayed, c, label + "/delayed");
                    break;
                }
                default: break;
            }
        }
    }
    v.require(worst <= kConservationTol,
              fmt("worst %.2e <= %.0e (%s) over %d runs, %d blow-up runs excluded", worst, kConservationTol,
                  worst_at.c_str(), runs, skipped));
    return v;
}

// 6 ---------------------------------------------------------------------------
Verdict blowup_one_population() {
    Verdict v;
    double secs = 0.0;
    const auto a = timed_run(panel("blowup_1pob", "top_left").run, secs);
    v.require(a.outcome.kind == OutcomeKind::Blowup && a.outcome.t_star < kBlowupTStar,
              fmt("D = 0: %s, t* = %.5f < %.0f (%s)", to_string(a.outcome.kind).c_str(), a.outcome.t_star,
                  kBlowupTStar, a.outcome.trigger.c_str()));
    v.require(secs < kRunSeconds, fmt("%.1f s", secs));
    RunConfig c = panel("blowup_1pob", "top_right").run;
    c.t_end = 10.0;
    const auto b = timed_run(c, secs);
    v.require(b.outcome.kind != OutcomeKind::Blowup,
              fmt("D = 0.1: %s through t = %.0f", to_string(b.outcome.kind).c_str(), c.t_end));
    v.require(secs < kRunSeconds, fmt("%.1f s", secs));
    return v;
}

// 7 ---------------------------------------------------------------------------
RunConfig all_delays_point_one() {
    RunConfig c = panel("blowup_EIR_ci_delay", "main").run;
    c.two.D_EE = 0.1;
    return c;
}

Verdict blowup_two_populations() {
    Verdict v;
    const auto a = simulate(panel("blowup_EIR_bEE", "main").run);
    v.require(a.outcome.kind == OutcomeKind::Blowup,
              fmt("(a) b_EE = 6: %s, t* = %.5f", to_string(a.outcome.kind).c_str(), a.outcome.t_star));
    const auto b = simulate(panel("blowup_EIR_ci_delay", "main").run);
    v.require(b.outcome.kind == OutcomeKind::Blowup,
              fmt("(b) D_EE = 0, other delays 0.1: %s, t* = %.5f", to_string(b.outcome.kind).c_str(),
                  b.outcome.t_star));
    const RunConfig cc = all_delays_point_one();
    const auto c = simulate(cc);
    v.require(c.outcome.kind != OutcomeKind::Blowup,
              fmt("(c) all delays 0.1: %s through t = %.0f", to_string(c.outcome.kind).c_str(), cc.t_end));
    return v;
}

// 8 ---------------------------------------------------------------------------
Verdict criterion_consistency() {
    Verdict v;
    struct Case {
        std::string label;
        RunConfig cfg;
        bool must_satisfy;
    };
    RunConfig entropy_run;  // criterion 9's start
    entropy_run.one.b = 0.1;
    entropy_run.initial.kind = InitialKind::SteadyRoot;
    entropy_run.initial.perturbation = -0.05;
    const std::vector<Case> cases{
        {"blowup_1pob/top_left", panel("blowup_1pob", "top_left").run, true},
        {"blowup_EIR_bEE", panel("blowup_EIR_bEE", "main").run, true},
        {"blowup_1pob/middle", panel("blowup_1pob", "middle").run, false},
        {"blowup_EIR_ci_delay", panel("blowup_EIR_ci_delay", "main").run, false},
        {"entropy start", entropy_run, false},
    };
    for (const auto& c : cases) {
        const Grid grid = make_grid(c.cfg);
        const InitialCondition ic = make_initial_condition(c.cfg, grid);
        const double b = c.cfg.populations == 2 ? c.cfg.two.b_EE : c.cfg.one.b;
        const auto crit = blowup_criterion(ic.rho_E, grid, b);
        if (c.must_satisfy)
            v.require(crit.satisfied, fmt("%s: margin %.3f >= 1", c.label.c_str(), crit.margin));
        if (crit.satisfied) {
            const auto r = simulate(c.cfg);
            v.require(r.outcome.kind == OutcomeKind::Blowup,
                      fmt("%s (margin %.3f): %s", c.label.c_str(), crit.margin, to_string(r.outcome.kind).c_str()));
        } else if (!c.must_satisfy) {
            v.require(true, fmt("%s: margin %.3f, not satisfied", c.label.c_str(), crit.margin));
        }
    }
    return v;
}

// 9 ---------------------------------------------------------------------------
Verdict entropy_decay() {
    RunConfig c;
    c.one.b = 0.1;
    c.one.D = 0.0;
    c.one.refractory_mode = RefractoryMode::Ratio;
    c.initial.kind = InitialKind::SteadyRoot;
    c.initial.perturbation = -0.05;
    c.entropy = EntropyReference::Root;
    c.t_end = 5.0;
    const auto r = simulate(c);
    Verdict v;
    int rises = 0;
    double worst_rise = 0.0;
    double st = 0, sy = 0, stt = 0, sty = 0;
    int n = 0;
    const auto& s = r.series.samples;
    for (std::size_t k = 1; k < s.size(); ++k) {
        if (s[k - 1].t >= 0.5) {
            const double rise = s[k].entropy - s[k - 1].entropy;
            worst_rise = std::max(worst_rise, rise);
            rises += rise > kEntropyStepTol;
        }
    }
    for (const auto& x : s) {
        if (x.t < 1.0 - 1e-12 || x.t > 5.0 + 1e-12) continue;
        const double y = std::log(x.entropy);
        st += x.t;
        sy += y;
        stt += x.t * x.t;
        sty += x.t * y;
        ++n;
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    v.require(rises == 0, fmt("largest step increase after t = 0.5: %.2e <= %.0e", worst_rise, kEntropyStepTol));
    v.require(-slope > 0.0, fmt("fitted rate mu = %.4f > 0 over [1, 5] (%d samples)", -slope, n));
    v.require(std::isfinite(s.front().entropy), fmt("E(0) = %.3e, E(5) = %.3e", s.front().entropy, s.back().entropy));
    return v;
}

// 10 --------------------------------------------------------------------------
Verdict periodic_solutions() {
    Verdict v;
    const auto a = simulate(panel("osci_R_MJ-2", "top").run);
    v.require(a.outcome.kind == OutcomeKind::Periodic && a.outcome.peaks >= 4,
              fmt("b = -4, nu = 20: %s, %d peaks, period %.4f", to_string(a.outcome.kind).c_str(),
                  a.outcome.peaks, a.outcome.period));
    const RunConfig bottom = panel("osci_R_MJ-1", "bottom").run;
    const auto b = simulate(bottom);
    v.require(b.outcome.kind == OutcomeKind::Steady,
              fmt("b = 1.5, v0 = 1.5: %s at t = %.0f, N = %.5f", to_string(b.outcome.kind).c_str(), bottom.t_end,
                  b.outcome.terminal_N));
    const auto c = simulate(panel("osci_R_MJ-1", "top").run);
    v.require(c.outcome.kind == OutcomeKind::Periodic,
              fmt("b = 1.5, v0 = 1.83: %s, %d peaks, period %.4f", to_string(c.outcome.kind).c_str(),
                  c.outcome.peaks, c.outcome.period));
    return v;
}

// 11 --------------------------------------------------------------------------
Verdict refractory_agreement() {
    Verdict v;
    for (const char* name : {"top", "middle"}) {
        const auto cmp = compare_refractory_modes(panel("blowup_ERD_ci_MJ", name).run);
        v.require(cmp.same_kind, fmt("%s: ratio %s, delayed %s", name, to_string(cmp.ratio.outcome.kind).c_str(),
                                     to_string(cmp.delayed.outcome.kind).c_str()));
        v.require(cmp.limit_N_gap <= kRefractoryGap,
                  fmt("%s: limit rates %.5f vs %.5f, gap %.4f <= %.2f (instantaneous terminal gap %.4f)", name,
                      limit_rate(cmp.ratio.outcome), limit_rate(cmp.delayed.outcome), cmp.limit_N_gap,
                      kRefractoryGap, cmp.terminal_N_gap));
    }
    return v;
}

// 12 --------------------------------------------------------------------------
constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Periodic u_t + L(u) = 0 on [0, 1) with n nodes from sin(2 pi x) to t = 1.
std::vector<double> evolve_periodic(std::size_t n, double dt_target,
                                    const std::function<void(std::span<const double>, std::span<double>)>& L) {
    const double dx = 1.0 / static_cast<double>(n);
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) u[j] = std::sin(kTwoPi * dx * j);
    const int steps = static_cast<int>(std::ceil(1.0 / dt_target));
    const double dt = 1.0 / steps;
    Rk3Workspace ws;
    for (int s = 0; s < steps; ++s)
        tvd_rk3_step(std::span<double>(u), dt, [&](int, std::span<const double> x, std::span<double> d) { L(x, d); },
                     ws);
    return u;
}

// L1 distance between a solution on n nodes and the even nodes of one on 2n.
double restricted_gap(const std::vector<double>& coarse, const std::vector<double>& fine) {
    double e = 0.0;
    for (std::size_t j = 0; j < coarse.size(); ++j) e += std::abs(coarse[j] - fine[2 * j]);
    return e / static_cast<double>(coarse.size());
}

double self_convergence(const std::vector<std::vector<double>>& u) {
    return std::log2(restricted_gap(u[0], u[1]) / restricted_gap(u[1], u[2]));
}

Verdict scheme_orders() {
    Verdict v;
    std::vector<std::vector<double>> adv, dif;
    for (std::size_t n : {40, 80, 160}) {
        const double dx = 1.0 / static_cast<double>(n);
        std::vector<double> vel(n, 1.0);
        adv.push_back(evolve_periodic(n, 0.5 * std::pow(dx, 5.0 / 3.0), [&](auto u, auto d) {
            weno5_advection(u, vel, dx, d, GhostClosure::Periodic);
        }));
        constexpr double a = 0.05;
        dif.push_back(evolve_periodic(n, 0.2 * dx * dx / a, [&](auto u, auto d) {
            std::fill(d.begin(), d.end(), 0.0);
            diffusion_term(u, a, dx, d, GhostClosure::Periodic);
        }));
    }
    const double p_adv = self_convergence(adv);
    const double p_dif = self_convergence(dif);
    v.require(p_adv >= kWenoOrder, fmt("WENO5 linear advection L1 self-convergence %.3f >= %.1f", p_adv, kWenoOrder));
    v.require(p_dif >= kDiffusionOrder, fmt("diffusion L1 self-convergence %.3f >= %.1f", p_dif, kDiffusionOrder));

    // y' = y: one step from y = 1, local error ~ dt^(p+1)
    auto local_error = [](double dt) {
        std::vector<double> y{1.0};
        Rk3Workspace ws;
        tvd_rk3_step(std::span<double>(y), dt, [](int, std::span<const double> u, std::span<double> d) { d[0] = u[0]; },
                     ws);
        return std::abs(y[0] - std::exp(dt));
    };
    const double p_rk = std::log2(local_error(0.05) / local_error(0.025)) - 1.0;
    v.require(p_rk >= kRk3Order, fmt("RK3 order from dt-halving of the local error %.3f >= %.1f", p_rk, kRk3Order));
    return v;
}

// 13 --------------------------------------------------------------------------
std::map<std::string, std::string> read_tree(const fs::path& root) {
    std::map<std::string, std::string> files;
    for (const auto& e : fs::recursive_directory_iterator(root)) {
        if (!e.is_regular_file()) continue;
        std::ifstream f(e.path(), std::ios::binary);
        std::ostringstream s;
        s << f.rdbuf();
        files[fs::relative(e.path(), root).string()] = s.str();
    }
    return files;
}

Verdict determinism() {
    Verdict v;
    const fs::path base = fs::temp_directory_path() / "nnlif_acceptance_determinism";
    int presets_checked = 0, files = 0, differing = 0;
    for (const auto& p : presets()) {
        if (p.panels.front().config.run.populations != 2) continue;
        ++presets_checked;
        std::vector<std::map<std::string, std::string>> trees;
        for (int k = 0; k <= kDeterminismRepeats; ++k) {
            Preset copy = p;
            const bool concurrent = k == kDeterminismRepeats;
            for (auto& pn : copy.panels) {
                // short horizons keep the repeats affordable; blow-ups end sooner anyway
                pn.config.run.t_end = std::min(pn.config.run.t_end, kDeterminismHorizon);
                pn.config.run.snapshot_times.clear();
                pn.config.run.concurrent = concurrent;
            }
            const fs::path dir = base / p.id / std::to_string(k);
            fs::remove_all(dir);
            write_bundle(run_preset(copy), dir);
            trees.push_back(read_tree(dir));
        }
        files += static_cast<int>(trees[0].size());
        for (std::size_t k = 1; k < trees.size(); ++k) differing += trees[k] != trees[0];
        std::printf("    %-22s %zu files, %d runs (last concurrent)\n", p.id.c_str(), trees[0].size(),
                    kDeterminismRepeats + 1);
        std::fflush(stdout);
    }
    fs::remove_all(base);
    v.require(presets_checked >= 7, fmt("%d two-population presets", presets_checked));
    v.require(differing == 0, fmt("%d of %d repeated bundles differ from the first (%d files each set)", differing,
                                  presets_checked * kDeterminismRepeats, files));
    return v;
}

struct Criterion {
    int id;
    const char* title;
    Verdict (*run)();
};

const Criterion kCriteria[] = {
    {1, "steady-state value", steady_state_value},
    {2, "steady-state count", steady_state_count},
    {3, "dual-form oracle and root parity", dual_form_and_parity},
    {4, "stationarity residual", stationarity_residual},
    {5, "conservation", conservation},
    {6, "blow-up, one population", blowup_one_population},
    {7, "blow-up, two populations", blowup_two_populations},
    {8, "criterion consistency", criterion_consistency},
    {9, "entropy decay", entropy_decay},
    {10, "periodic solutions", periodic_solutions},
    {11, "refractory-mode agreement", refractory_agreement},
    {12, "scheme orders", scheme_orders},
    {13, "determinism", determinism},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    int failed = 0;
    for (const auto& c : kCriteria) {
        if (!wanted.empty() && std::find(wanted.begin(), wanted.end(), c.id) == wanted.end()) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Verdict v;
        try {
            v = c.run();
        } catch (const std::exception& e) {
            v.pass = false;
            v.detail = std::string("exception: ") + e.what();
        }
        std::printf("criterion %2d %s: %s: %s (%.1f s)\n", c.id, v.pass ? "PASS" : "FAIL", c.title,
                    v.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        failed += !v.pass;
    }
    return failed == 0 ? 0 : 1;
}
