// Command-line front end: one subcommand per experiment action plus `preset`.
//
// Exit status: 0 success (a blow-up outcome included), 1 usage or unknown name,
// 2 configuration error, 3 numerical failure, 4 output failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "nnlif/config.hpp"
#include "nnlif/experiments.hpp"
#include "nnlif/output.hpp"
#include "nnlif/presets.hpp"

namespace {

enum Exit { kOk = 0, kUsage = 1, kConfig = 2, kNumerical = 3, kOutput = 4 };

struct Options {
    std::string config;
    std::string preset;
    std::string panel;
    std::string out = "out";
    std::vector<std::string> overrides;
    bool concurrent = false;
};

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw nnlif::ConfigError("cannot read config file " + path, 0);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

nnlif::ExperimentConfig load(const Options& o) {
    if (!o.config.empty() && !o.preset.empty())
        throw UsageError("give either --config or --preset, not both");
    nnlif::ExperimentConfig cfg;
    if (!o.preset.empty()) {
        const nnlif::Preset* p = nnlif::find_preset(o.preset);
        if (!p) throw UsageError("unknown preset '" + o.preset + "' (see `preset --list`)");
        const auto& panel = o.panel.empty() ? p->panels.front() : nnlif::find_panel(*p, o.panel);
        cfg = nnlif::apply_overrides(panel.config, o.overrides);
    } else {
        const std::string text = o.config.empty() ? std::string() : read_text(o.config);
        auto parsed = nnlif::parse_config(text, o.overrides);
        cfg = parsed.config;
    }
    cfg.run.concurrent = o.concurrent;
    return cfg;
}

void add_common(CLI::App* sub, Options& o, bool with_source) {
    if (with_source) {
        sub->add_option("--config", o.config, "configuration file");
        sub->add_option("--preset", o.preset, "start from a preset's configuration");
    }
    sub->add_option("--panel", o.panel, "preset panel (default: the first)");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--override", o.overrides, "section.key=value, applied last")->take_all();
    sub->add_flag("--concurrent", o.concurrent, "step the two populations on two threads");
}

const char* describe(nnlif::Action a) {
    switch (a) {
        case nnlif::Action::Steady: return "solve for every steady state and write its profile";
        case nnlif::Action::Bifurcation: return "count steady states along [scan] sweep";
        case nnlif::Action::Simulate: return "evolve the densities and classify the outcome";
        case nnlif::Action::Stability: return "perturb each steady state and classify where it goes";
        case nnlif::Action::BlowupCheck: return "test the initial datum against the blow-up criterion";
        case nnlif::Action::CompareRefractory: return "run the ratio and delayed refractory closures side by side";
    }
    return "";
}

int report(const char* kind, const std::exception& e, int code) {
    std::cerr << "nnlif: " << kind << ": " << e.what() << '\n';
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mean-field integrate-and-fire networks: steady states, simulations, presets"};
    app.require_subcommand(1);
    Options o;

    std::vector<std::pair<CLI::App*, nnlif::Action>> actions;
    for (nnlif::Action a : {nnlif::Action::Steady, nnlif::Action::Bifurcation, nnlif::Action::Simulate,
                            nnlif::Action::Stability, nnlif::Action::BlowupCheck,
                            nnlif::Action::CompareRefractory}) {
        CLI::App* sub = app.add_subcommand(nnlif::to_string(a), describe(a));
        add_common(sub, o, true);
        actions.emplace_back(sub, a);
    }
    CLI::App* preset = app.add_subcommand("preset", "run every panel of a built-in preset");
    std::string preset_id;
    bool list = false;
    preset->add_option("id", preset_id, "preset id");
    preset->add_flag("--list", list, "list presets and their panels");
    add_common(preset, o, false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (preset->parsed()) {
            if (list) {
                for (const auto& p : nnlif::presets()) {
                    std::cout << p.id << ": " << p.description << '\n';
                    for (const auto& panel : p.panels)
                        std::cout << "    " << panel.name << " (" << nnlif::to_string(panel.action) << ")\n";
                }
                return kOk;
            }
            if (preset_id.empty()) throw UsageError("preset needs an id (see `preset --list`)");
            const nnlif::Preset* p = nnlif::find_preset(preset_id);
            if (!p) throw UsageError("unknown preset '" + preset_id + "' (see `preset --list`)");
            // concurrency is a run flag, not a configuration key
            nnlif::Preset copy = *p;
            for (auto& panel : copy.panels) panel.config.run.concurrent = o.concurrent;
            const nnlif::OutputBundle b = nnlif::run_preset(copy, o.overrides, o.panel);
            nnlif::write_bundle(b, o.out);
            std::cout << "wrote " << o.out << '\n';
            return kOk;
        }
        for (const auto& [sub, action] : actions) {
            if (!sub->parsed()) continue;
            const nnlif::ExperimentConfig cfg = load(o);
            const nnlif::OutputBundle b = nnlif::run_experiment(action, cfg);
            nnlif::write_bundle(b, o.out);
            for (const auto& [k, v] : b.summary)
                if (k == "classification" || k == "roots" || k == "satisfied" ||
                    k == "same_classification")
                    std::cout << k << " = " << v << '\n';
            std::cout << "wrote " << o.out << '\n';
            return kOk;
        }
    } catch (const UsageError& e) {
        return report("usage", e, kUsage);
    } catch (const nnlif::ConfigError& e) {
        return report("config", e, kConfig);
    } catch (const nnlif::ParameterError& e) {
        return report("config", e, kConfig);
    } catch (const nnlif::OutputError& e) {
        return report("output", e, kOutput);
    } catch (const std::invalid_argument& e) {
        return report("config", e, kConfig);
    } catch (const std::exception& e) {
        return report("numerical failure", e, kNumerical);
    }
    return kUsage;
}
