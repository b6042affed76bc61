#include "nnlif/experiments.hpp"

#include <cmath>
#include <limits>

#include "nnlif/format.hpp"

namespace nnlif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::vector<double> nodes(const Grid& g) {
    std::vector<double> v(g.size());
    for (std::size_t j = 0; j < g.size(); ++j) v[j] = g.v(j);
    return v;
}

void note_thresholds(OutputBundle& b, const RunConfig& cfg) {
    b.note("threshold.N_cap", cfg.blowup.N_cap);
    b.note("threshold.dt_floor", cfg.blowup.dt_floor);
    b.note("threshold.self_drive_cap", cfg.blowup.self_drive_cap);
}

void note_outcome(OutputBundle& b, const OutcomeClassification& o, const std::string& prefix = "") {
    b.note(prefix + "classification", to_string(o.kind));
    if (o.kind == OutcomeKind::Blowup) {
        b.note(prefix + "t_star", o.t_star);
        b.note(prefix + "threshold_fired", o.trigger);
    }
    if (o.kind == OutcomeKind::Periodic) {
        b.note(prefix + "period", o.period);
        b.note(prefix + "amplitude", o.amplitude);
        b.note(prefix + "peaks", std::to_string(o.peaks));
        b.note(prefix + "cycle_mean_N", o.cycle_mean_N);
    }
    b.note(prefix + "terminal_N", o.terminal_N);
    b.note(prefix + "window_mean_N", o.window_mean_N);
    if (o.l1_to_reference >= 0.0) b.note(prefix + "l1_to_reference", o.l1_to_reference);
}

double conservation_error(const std::vector<Sample>& samples, bool two) {
    double worst = 0.0;
    for (const Sample& s : samples) {
        worst = std::max(worst, std::abs(s.mass_E + s.R_E - 1.0));
        if (two) worst = std::max(worst, std::abs(s.mass_I + s.R_I - 1.0));
    }
    return worst;
}

OutputBundle steady(const ExperimentConfig& cfg) {
    const RunConfig& run = cfg.run;
    const Grid grid = make_grid(run);
    const bool two = run.populations == 2;
    const SteadyStates ss = two ? find_steady_states(run.two, cfg.scan_points, grid)
                                : find_steady_states(run.one, cfg.scan_points, grid);
    OutputBundle b;
    b.has_bifurcation = true;
    b.note("roots", std::to_string(ss.roots.size()));
    b.note("tangency_warning", ss.tangency_warning ? "true" : "false");
    for (const auto& w : ss.warnings) b.note("warning", w);
    const auto v = nodes(grid);
    for (std::size_t i = 0; i < ss.roots.size(); ++i) {
        const auto& r = ss.roots[i];
        const std::string k = "root_" + std::to_string(i) + ".";
        b.bifurcation.push_back({kNaN, static_cast<int>(i), r.N_E, two ? r.N_I : kNaN});
        b.note(k + "N_E", r.N_E);
        if (two) b.note(k + "N_I", r.N_I);
        b.note(k + "R_E", r.R_E);
        if (two) b.note(k + "R_I", r.R_I);
        b.note(k + "residual", r.residual);
        b.note(k + "mass_E", total_mass(r.profile_E, grid));
        if (two) b.note(k + "mass_I", total_mass(r.profile_I, grid));
        b.profiles.push_back({"steady_" + std::to_string(i), v,
                              r.profile_E.raw(),
                              two ? r.profile_I.raw() : std::vector<double>{}});
    }
    if (two) {
        const auto u = uniqueness_bounds(run.two);
        b.note("uniqueness.A", u.A);
        b.note("uniqueness.B", u.B);
        b.note("uniqueness.sufficient", u.sufficient_unique ? "true" : "false");
    }
    return b;
}

OutputBundle bifurcation(const ExperimentConfig& cfg) {
    if (cfg.run.populations != 2) throw std::invalid_argument("bifurcation scans need populations = 2");
    if (cfg.sweep.parameter.empty()) throw std::invalid_argument("bifurcation needs [scan] sweep");
    const auto scan = bifurcation_scan(cfg.run.two, cfg.sweep.parameter, cfg.sweep.values, cfg.scan_points);
    OutputBundle b;
    b.has_bifurcation = true;
    b.note("sweep", scan.parameter);
    b.note("points", std::to_string(scan.points.size()));
    for (const auto& pt : scan.points) {
        for (std::size_t i = 0; i < pt.roots_NE.size(); ++i)
            b.bifurcation.push_back({pt.value, static_cast<int>(i), pt.roots_NE[i], pt.roots_NI[i]});
        const std::string k = scan.parameter + "=" + format_number(pt.value);
        b.note(k + ".roots", std::to_string(pt.roots_NE.size()));
        if (pt.tangency_warning) b.note(k + ".tangency_warning", "true");
    }
    return b;
}

OutputBundle stability(const ExperimentConfig& cfg) {
    const auto probes = probe_stability(cfg.run, cfg.run.initial.perturbation);
    OutputBundle b;
    b.note("roots", std::to_string(probes.size()));
    b.note("perturbation", cfg.run.initial.perturbation);
    for (std::size_t i = 0; i < probes.size(); ++i) {
        const auto& p = probes[i];
        const std::string k = "root_" + std::to_string(i) + ".";
        b.note(k + "N_E", p.root.N_E);
        if (cfg.run.populations == 2) b.note(k + "N_I", p.root.N_I);
        b.note(k + "classification", to_string(p.run.outcome.kind));
        b.note(k + "settled_near", std::to_string(p.settled_near));
        RunConfig c = cfg.run;
        c.initial.kind = InitialKind::SteadyRoot;
        c.initial.root_index = static_cast<int>(i);
        b.children.emplace_back("root_" + std::to_string(i), simulation_bundle(p.run, c));
    }
    return b;
}

OutputBundle blowup_check(const ExperimentConfig& cfg) {
    const RunConfig& run = cfg.run;
    const Grid grid = make_grid(run);
    const InitialCondition ic = make_initial_condition(run, grid);
    const double b_EE = run.populations == 2 ? run.two.b_EE : run.one.b;
    OutputBundle b;
    b.note("b_EE", b_EE);
    b.note("initial_mass_E", total_mass(ic.rho_E, grid));
    b.note("initial_R_E", ic.R_E);
    if (b_EE > 0.0) {
        const auto c = blowup_criterion(ic.rho_E, grid, b_EE);
        b.note("satisfied", c.satisfied ? "true" : "false");
        b.note("margin", c.margin);
        b.note("best_mu", c.best_mu);
    } else {
        b.note("satisfied", "false");
        b.note("criterion", "not applicable: needs b_EE > 0");
    }
    const std::string D_EE = format_number(run.populations == 2 ? run.two.D_EE : run.one.D);
    b.note("D_EE", D_EE);
    for (const auto& n : ic.notes) b.note("note", n);
    b.profiles.push_back({"initial", nodes(grid), ic.rho_E.raw(), ic.rho_I.raw()});
    return b;
}

OutputBundle compare(const ExperimentConfig& cfg) {
    const auto cmp = compare_refractory_modes(cfg.run);
    OutputBundle b;
    b.note("same_classification", cmp.same_kind ? "true" : "false");
    note_outcome(b, cmp.ratio.outcome, "ratio.");
    note_outcome(b, cmp.delayed.outcome, "delayed.");
    b.note("sup_gap_N", cmp.sup_gap_N);
    b.note("sup_gap_R", cmp.sup_gap_R);
    b.note("terminal_N_gap", cmp.terminal_N_gap);
    b.note("limit_N_gap", cmp.limit_N_gap);
    RunConfig r = cfg.run, d = cfg.run;
    r.one.refractory_mode = r.two.refractory_mode = RefractoryMode::Ratio;
    d.one.refractory_mode = d.two.refractory_mode = RefractoryMode::Delayed;
    b.children.emplace_back("ratio", simulation_bundle(cmp.ratio, r));
    b.children.emplace_back("delayed", simulation_bundle(cmp.delayed, d));
    return b;
}

}  // namespace

std::string to_string(Action a) {
    switch (a) {
        case Action::Steady: return "steady";
        case Action::Bifurcation: return "bifurcation";
        case Action::Simulate: return "simulate";
        case Action::Stability: return "stability";
        case Action::BlowupCheck: return "blowup-check";
        case Action::CompareRefractory: return "compare-refractory";
    }
    return "?";
}

std::optional<Action> action_from_string(const std::string& s) {
    for (Action a : {Action::Steady, Action::Bifurcation, Action::Simulate, Action::Stability,
                     Action::BlowupCheck, Action::CompareRefractory})
        if (to_string(a) == s) return a;
    return std::nullopt;
}

OutputBundle simulation_bundle(const SimulationResult& r, const RunConfig& cfg) {
    OutputBundle b;
    b.has_series = true;
    b.series = r.series.samples;
    for (std::size_t i = 0; i < r.series.snapshots.size(); ++i) {
        b.profiles.push_back(snapshot_profile(r.series.snapshots[i], r.series.v, i));
        b.note(b.profiles.back().name + ".t", r.series.snapshots[i].t);
    }
    ProfileFile last = snapshot_profile(r.final_state, r.series.v, 0);
    last.name = "final_state";
    b.profiles.push_back(std::move(last));
    b.note("final_state.t", r.final_state.t);

    note_outcome(b, r.outcome);
    note_thresholds(b, cfg);
    b.note("populations", std::to_string(cfg.populations));
    b.note("refractory_mode",
           std::string(to_string(cfg.populations == 2 ? cfg.two.refractory_mode : cfg.one.refractory_mode)));
    b.note("conservation_error", conservation_error(r.series.samples, cfg.populations == 2));
    const RunCounters& c = r.counters;
    b.note("counters.steps", std::to_string(c.steps));
    b.note("counters.min_dt", c.min_dt);
    b.note("counters.max_dt", c.max_dt);
    b.note("counters.negative_floor", std::to_string(c.negative_floor));
    b.note("counters.floor_mass", c.floor_mass);
    b.note("counters.rate_clamps", std::to_string(c.rate_clamps));
    b.note("counters.refractory_clamps", std::to_string(c.refractory_clamps));
    b.note("counters.left_leak", c.left_leak);
    b.note("counters.peak_N", c.peak_N);
    b.note("counters.peak_self_drive", c.peak_self_drive);
    if (r.reference) b.note("entropy_reference_N_E", r.reference->N_E);
    for (const auto& n : r.notes) b.note("note", n);
    return b;
}

OutputBundle run_experiment(Action action, const ExperimentConfig& cfg) {
    validate_experiment(cfg);
    OutputBundle b;
    switch (action) {
        case Action::Steady: b = steady(cfg); break;
        case Action::Bifurcation: b = bifurcation(cfg); break;
        case Action::Simulate: b = simulation_bundle(simulate(cfg.run), cfg.run); break;
        case Action::Stability: b = stability(cfg); break;
        case Action::BlowupCheck: b = blowup_check(cfg); break;
        case Action::CompareRefractory: b = compare(cfg); break;
    }
    b.summary.insert(b.summary.begin(), {"action", to_string(action)});
    b.config_text = render_config(cfg);
    return b;
}

}  // namespace nnlif
