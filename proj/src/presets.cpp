#include "nnlif/presets.hpp"

#include <stdexcept>
#include <tuple>


namespace nnlif {

namespace {

constexpr double kSpikeWidth = 0.0003;

ExperimentConfig one_pop(double b, double D, RefractoryMode mode, double v0, double R0,
                         double nu_ext, double t_end) {
    ExperimentConfig c;
    c.run.populations = 1;
    c.run.one.b = b;
    c.run.one.D = D;
    c.run.one.refractory_mode = mode;
    c.run.one.nu_ext = nu_ext;
    c.run.initial.E = {v0, kSpikeWidth, R0};
    c.run.t_end = t_end;
    return c;
}

// b_IE, b_II, b_EI default to the values shared by the two-population figures.
ExperimentConfig two_pop(double b_EE, double v0_E, double D_EE, double D_other, double t_end) {
    ExperimentConfig c;
    c.run.populations = 2;
    c.run.two.b_EE = b_EE;
    c.run.two.refractory_mode = RefractoryMode::Delayed;
    c.run.two.D_EE = D_EE;
    c.run.two.D_IE = c.run.two.D_EI = c.run.two.D_II = D_other;
    c.run.initial.E = {v0_E, kSpikeWidth, 0.0};
    c.run.initial.I = {1.25, kSpikeWidth, 0.0};
    c.run.t_end = t_end;
    return c;
}

ExperimentConfig three_states(double tau_E) {
    ExperimentConfig c;
    c.run.populations = 2;
    c.run.two.b_EE = 3.0;
    c.run.two.b_IE = 7.0;
    c.run.two.b_II = 2.0;
    c.run.two.b_EI = 0.01;
    c.run.two.tau_E = tau_E;
    c.run.two.tau_I = 0.2;
    c.run.two.refractory_mode = RefractoryMode::Delayed;
    return c;
}

ExperimentConfig sweep(ExperimentConfig c, std::string parameter, double from, double to, int n) {
    c.sweep.parameter = std::move(parameter);
    for (int k = 0; k < n; ++k) c.sweep.values.push_back(from + (to - from) * k / (n - 1));
    return c;
}

ExperimentConfig snapshots(ExperimentConfig c, std::vector<double> times) {
    c.run.snapshot_times = std::move(times);
    return c;
}

std::vector<Preset> build() {
    const std::string grid_pin = "grid: n_cells = 1000, v_left = 6";
    std::vector<Preset> out;

    {
        ExperimentConfig base = three_states(0.2);
        out.push_back({"bif_EI",
                       "steady-state count against tau_E (b_EE = 3) and against b_EE (tau_E = 0.2)",
                       {{"tau_E", Action::Bifurcation, sweep(base, "tau_E", 0.05, 1.0, 20)},
                        {"b_EE", Action::Bifurcation, sweep(base, "b_EE", 0.5, 6.0, 20)}},
                       {"tau_E sweep: 20 points on [0.05, 1]", "b_EE sweep: 20 points on [0.5, 6]",
                        grid_pin}});
    }
    {
        const auto none = RefractoryMode::None, ratio = RefractoryMode::Ratio;
        out.push_back(
            {"blowup_1pob",
             "one excitatory population, b = 0.5, spike at 1.83: delays against blow-up",
             {{"top_left", Action::Simulate, one_pop(0.5, 0.0, none, 1.83, 0.0, 0.0, 5.0)},
              {"top_right", Action::Simulate,
               snapshots(one_pop(0.5, 0.1, none, 1.83, 0.0, 0.0, 10.0), {0.05, 1.0})},
              {"middle", Action::Simulate, one_pop(0.5, 0.0, ratio, 1.83, 0.2, 0.0, 5.0)},
              {"bottom", Action::Simulate,
               snapshots(one_pop(0.5, 0.07, ratio, 1.83, 0.2, 0.0, 10.0), {0.05, 1.0})}},
             {"t_end: 5 without delay, 10 with delay", "snapshots at t = 0.05 and 1 for delayed runs",
              grid_pin}});
    }
    out.push_back({"blowup_EIR_bEE",
                   "two populations, b_EE = 6, no delays, spikes at 1.25",
                   {{"main", Action::Simulate, two_pop(6.0, 1.25, 0.0, 0.0, 5.0)}},
                   {"t_end = 5", "R0_E = R0_I = 0", grid_pin}});
    out.push_back({"blowup_EIR_ci",
                   "two populations, b_EE = 0.5, excitatory spike at 1.89, no delays",
                   {{"main", Action::Simulate, two_pop(0.5, 1.89, 0.0, 0.0, 5.0)}},
                   {"t_end = 5", "R0_E = R0_I = 0", grid_pin}});
    out.push_back({"blowup_EIR_ci_delay",
                   "as blowup_EIR_ci with all delays 0.1 except D_EE = 0",
                   {{"main", Action::Simulate, two_pop(0.5, 1.89, 0.0, 0.1, 5.0)}},
                   {"t_end = 5", "R0_E = R0_I = 0", grid_pin}});
    out.push_back({"noblowup_EIRD_ci",
                   "as blowup_EIR_ci with D_EE = 0.1",
                   {{"main", Action::Simulate,
                     snapshots(two_pop(0.5, 1.89, 0.1, 0.0, 5.0), {0.05, 0.5, 2.0})}},
                   {"t_end = 5", "R0_E = R0_I = 0", "snapshots at t = 0.05, 0.5, 2", grid_pin}});
    for (auto [id, tau_E, label] : {std::tuple{"est_eq_EI1", 0.2, "0.2"}, {"est_eq_EI2", 0.3, "0.3"}}) {
        ExperimentConfig c = three_states(tau_E);
        c.run.t_end = 8.0;
        c.run.initial.perturbation = -0.01;
        c.run.snapshot_times = {1.0};
        out.push_back({id,
                       std::string("stability of the three steady states, tau_E = ") + label,
                       {{"steady", Action::Steady, c}, {"stability", Action::Stability, c}},
                       {"refractory_mode = delayed", "start: steady profile with 1% of its mass moved to R",
                        "t_end = 8", "snapshot at t = 1", grid_pin}});
    }
    {
        const auto ratio = RefractoryMode::Ratio;
        out.push_back({"osci_R_MJ-1",
                       "one excitatory population, b = 1.5, D = 0.1: oscillation needs a concentrated start",
                       {{"top", Action::Simulate, one_pop(1.5, 0.1, ratio, 1.83, 0.2, 0.0, 10.0)},
                        {"bottom", Action::Simulate, one_pop(1.5, 0.1, ratio, 1.5, 0.2, 0.0, 20.0)}},
                       {"t_end: 10 (top), 20 (bottom, slow approach to the steady state)", grid_pin}});
        out.push_back({"osci_R_MJ-2",
                       "one inhibitory population, b = -4, D = 0.1: oscillations",
                       {{"top", Action::Simulate, one_pop(-4.0, 0.1, ratio, 1.83, 0.2, 20.0, 5.0)},
                        {"middle", Action::Simulate, one_pop(-4.0, 0.1, ratio, 1.5, 0.2, 20.0, 5.0)},
                        {"bottom", Action::Simulate, one_pop(-4.0, 0.1, ratio, 1.5, 0.2, 0.0, 5.0)}},
                       {"t_end = 5", grid_pin}});

        ExperimentConfig st = one_pop(-4.0, 0.1, ratio, 1.83, 0.0, 20.0, 5.0);
        st.run.initial.kind = InitialKind::Stationary;
        st.run.initial.N_E = 3.669;
        ExperimentConfig nu10 = st, nu40 = st;
        for (auto* c : {&nu10, &nu40}) {
            c->run.initial.kind = InitialKind::SteadyRoot;
            c->run.initial.N_E = 0.0;
        }
        nu10.run.one.nu_ext = 10.0;
        nu40.run.one.nu_ext = 40.0;
        out.push_back({"osci_R_MJ-3",
                       "one inhibitory population, b = -4, D = 0.1, nu_ext = 20: unique steady state, "
                       "oscillation from a start at it",
                       {{"steady", Action::Steady, st},
                        {"middle", Action::Simulate, st},
                        {"bottom_nu10", Action::Simulate, nu10},
                        {"bottom_nu40", Action::Simulate, nu40}},
                       {"t_end = 5", "R(0) = tau N = 0.091725 from the stationary start",
                        "bottom panels: nu_ext = 10 and 40, started at their own steady state", grid_pin}});

        ExperimentConfig top = one_pop(-4.0, 0.1, ratio, 1.83, 0.2, 20.0, 10.0);
        top.run.output_interval = 0.002;
        ExperimentConfig middle = one_pop(0.5, 0.07, ratio, 1.83, 0.2, 0.0, 10.0);
        out.push_back({"blowup_ERD_ci_MJ",
                       "ratio closure M = R / tau against the delayed closure M = N(t - tau)",
                       {{"top", Action::CompareRefractory, top},
                        {"middle", Action::CompareRefractory, middle}},
                       {"t_end = 10", "top: output_interval = 0.002 to resolve the cycle means", grid_pin}});
    }
    {
        ExperimentConfig c = two_pop(0.5, 1.25, 0.1, 0.1, 5.0);
        c.run.two.b_II = 4.0;
        c.run.two.b_EI = 1.0;
        c.run.two.nu_E_ext = 20.0;
        out.push_back({"oscilaciones_EI",
                       "two populations with delays: oscillating rates",
                       {{"main", Action::Simulate, c}},
                       {"all delays 0.1", "t_end = 5", "R0_E = R0_I = 0", grid_pin}});
    }
    return out;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build();
    return all;
}

const Preset* find_preset(const std::string& id) {
    for (const auto& p : presets())
        if (p.id == id) return &p;
    return nullptr;
}

const PresetPanel& find_panel(const Preset& preset, const std::string& name) {
    std::string names;
    for (const auto& p : preset.panels) {
        if (p.name == name) return p;
        names += (names.empty() ? "" : ", ") + p.name;
    }
    throw std::invalid_argument("preset " + preset.id + " has no panel '" + name + "' (panels: " +
                                names + ")");
}

OutputBundle run_preset(const Preset& preset, const std::vector<std::string>& overrides,
                        const std::string& panel) {
    if (!panel.empty()) find_panel(preset, panel);
    OutputBundle b;
    b.note("preset", preset.id);
    b.note("description", preset.description);
    for (const auto& pin : preset.pins) b.note("pin", pin);
    for (const auto& o : overrides) b.note("override", o);
    for (const auto& p : preset.panels) {
        if (!panel.empty() && p.name != panel) continue;
        OutputBundle child = run_experiment(p.action, apply_overrides(p.config, overrides));
        child.summary.insert(child.summary.begin(), {"preset", preset.id + "/" + p.name});
        std::size_t at = 1;
        for (const auto& pin : preset.pins)
            child.summary.insert(child.summary.begin() + at++, {"pin", pin});
        b.note("panel." + p.name, to_string(p.action));
        b.children.emplace_back(p.name, std::move(child));
    }
    return b;
}

}  // namespace nnlif
