#include "nnlif/config.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "nnlif/format.hpp"

namespace nnlif {

namespace {

enum class Scope { Both, One, Two };

struct Key {
    std::string section;
    std::string name;
    Scope scope;
    // throws std::invalid_argument with a message naming what was expected
    std::function<void(ExperimentConfig&, std::string_view)> set;
    std::function<std::string(const ExperimentConfig&)> get;
    bool rendered = true;
};

template <class Access>
Key number(std::string section, std::string name, Scope scope, Access access) {
    return {std::move(section), std::move(name), scope,
            [access](ExperimentConfig& c, std::string_view v) {
                const auto x = parse_number(v);
                if (!x) throw std::invalid_argument("expected a number");
                access(c) = *x;
            },
            [access](const ExperimentConfig& c) {
                return format_number(access(const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Access>
Key integer(std::string section, std::string name, Scope scope, Access access) {
    return {std::move(section), std::move(name), scope,
            [access](ExperimentConfig& c, std::string_view v) {
                const auto x = parse_integer(v);
                if (!x || *x < 0) throw std::invalid_argument("expected a non-negative integer");
                using T = std::remove_reference_t<decltype(access(c))>;
                access(c) = static_cast<T>(*x);
            },
            [access](const ExperimentConfig& c) {
                return std::to_string(access(const_cast<ExperimentConfig&>(c)));
            }};
}

template <class Access>
Key number_list(std::string section, std::string name, Access access) {
    return {std::move(section), std::move(name), Scope::Both,
            [access](ExperimentConfig& c, std::string_view v) {
                const auto x = parse_number_list(v);
                if (!x) throw std::invalid_argument("expected comma-separated numbers");
                access(c) = *x;
            },
            [access](const ExperimentConfig& c) {
                std::string out;
                for (double x : access(const_cast<ExperimentConfig&>(c))) {
                    if (!out.empty()) out += ", ";
                    out += format_number(x);
                }
                return out;
            }};
}

EntropyReference entropy_from_string(std::string_view s) {
    if (s == "none") return EntropyReference::None;
    if (s == "root") return EntropyReference::Root;
    throw std::invalid_argument("expected none or root");
}

std::string to_string(EntropyReference e) { return e == EntropyReference::Root ? "root" : "none"; }

std::vector<double> linspace(double a, double b, long long n) {
    std::vector<double> out(static_cast<std::size_t>(n));
    for (long long k = 0; k < n; ++k) out[k] = n == 1 ? a : a + (b - a) * k / (n - 1);
    return out;
}

const std::vector<Key>& key_table() {
    static const std::vector<Key> table = [] {
        std::vector<Key> t;
        using C = ExperimentConfig;
        t.push_back({"model", "populations", Scope::Both,
                     [](C& c, std::string_view v) {
                         const auto x = parse_integer(v);
                         if (!x || (*x != 1 && *x != 2)) throw std::invalid_argument("expected 1 or 2");
                         c.run.populations = static_cast<int>(*x);
                     },
                     [](const C& c) { return std::to_string(c.run.populations); }});
        t.push_back({"model", "refractory_mode", Scope::Both,
                     [](C& c, std::string_view v) {
                         const RefractoryMode m = refractory_mode_from_string(v);
                         (c.run.populations == 1 ? c.run.one.refractory_mode : c.run.two.refractory_mode) = m;
                     },
                     [](const C& c) {
                         return std::string(to_string(c.run.populations == 1 ? c.run.one.refractory_mode
                                                                             : c.run.two.refractory_mode));
                     }});
        t.push_back({"model", "V_F", Scope::Both,
                     [](C& c, std::string_view v) {
                         const auto x = parse_number(v);
                         if (!x) throw std::invalid_argument("expected a number");
                         (c.run.populations == 1 ? c.run.one.V_F : c.run.two.V_F) = *x;
                     },
                     [](const C& c) { return format_number(c.run.populations == 1 ? c.run.one.V_F : c.run.two.V_F); }});
        t.push_back({"model", "V_R", Scope::Both,
                     [](C& c, std::string_view v) {
                         const auto x = parse_number(v);
                         if (!x) throw std::invalid_argument("expected a number");
                         (c.run.populations == 1 ? c.run.one.V_R : c.run.two.V_R) = *x;
                     },
                     [](const C& c) { return format_number(c.run.populations == 1 ? c.run.one.V_R : c.run.two.V_R); }});

        t.push_back(number("model", "b", Scope::One, [](C& c) -> double& { return c.run.one.b; }));
        t.push_back(number("model", "d0", Scope::One, [](C& c) -> double& { return c.run.one.d0; }));
        t.push_back(number("model", "d1", Scope::One, [](C& c) -> double& { return c.run.one.d1; }));
        t.push_back(number("model", "nu_ext", Scope::One, [](C& c) -> double& { return c.run.one.nu_ext; }));
        t.push_back(number("model", "tau", Scope::One, [](C& c) -> double& { return c.run.one.tau; }));
        t.push_back(number("model", "D", Scope::One, [](C& c) -> double& { return c.run.one.D; }));

        t.push_back(number("model", "b_EE", Scope::Two, [](C& c) -> double& { return c.run.two.b_EE; }));
        t.push_back(number("model", "b_IE", Scope::Two, [](C& c) -> double& { return c.run.two.b_IE; }));
        t.push_back(number("model", "b_II", Scope::Two, [](C& c) -> double& { return c.run.two.b_II; }));
        t.push_back(number("model", "b_EI", Scope::Two, [](C& c) -> double& { return c.run.two.b_EI; }));
        t.push_back(number("model", "d_E", Scope::Two, [](C& c) -> double& { return c.run.two.d_E; }));
        t.push_back(number("model", "d_I", Scope::Two, [](C& c) -> double& { return c.run.two.d_I; }));
        t.push_back(number("model", "dcoef_EE", Scope::Two, [](C& c) -> double& { return c.run.two.dcoef_EE; }));
        t.push_back(number("model", "dcoef_IE", Scope::Two, [](C& c) -> double& { return c.run.two.dcoef_IE; }));
        t.push_back(number("model", "dcoef_II", Scope::Two, [](C& c) -> double& { return c.run.two.dcoef_II; }));
        t.push_back(number("model", "dcoef_EI", Scope::Two, [](C& c) -> double& { return c.run.two.dcoef_EI; }));
        t.push_back(number("model", "nu_E_ext", Scope::Two, [](C& c) -> double& { return c.run.two.nu_E_ext; }));
        t.push_back(number("model", "D_EE", Scope::Two, [](C& c) -> double& { return c.run.two.D_EE; }));
        t.push_back(number("model", "D_IE", Scope::Two, [](C& c) -> double& { return c.run.two.D_IE; }));
        t.push_back(number("model", "D_II", Scope::Two, [](C& c) -> double& { return c.run.two.D_II; }));
        t.push_back(number("model", "D_EI", Scope::Two, [](C& c) -> double& { return c.run.two.D_EI; }));
        t.push_back(number("model", "tau_E", Scope::Two, [](C& c) -> double& { return c.run.two.tau_E; }));
        t.push_back(number("model", "tau_I", Scope::Two, [](C& c) -> double& { return c.run.two.tau_I; }));

        t.push_back(number("grid", "v_left", Scope::Both, [](C& c) -> double& { return c.run.grid.v_left; }));
        t.push_back(integer("grid", "n_cells", Scope::Both, [](C& c) -> std::size_t& { return c.run.grid.n_cells; }));

        t.push_back({"initial", "kind", Scope::Both,
                     [](C& c, std::string_view v) { c.run.initial.kind = initial_kind_from_string(std::string(v)); },
                     [](const C& c) { return to_string(c.run.initial.kind); }});
        t.push_back(number("initial", "v0_E", Scope::Both, [](C& c) -> double& { return c.run.initial.E.v0; }));
        t.push_back(number("initial", "sigma_E", Scope::Both, [](C& c) -> double& { return c.run.initial.E.sigma; }));
        t.push_back(number("initial", "R0_E", Scope::Both, [](C& c) -> double& { return c.run.initial.E.R0; }));
        t.push_back(number("initial", "v0_I", Scope::Two, [](C& c) -> double& { return c.run.initial.I.v0; }));
        t.push_back(number("initial", "sigma_I", Scope::Two, [](C& c) -> double& { return c.run.initial.I.sigma; }));
        t.push_back(number("initial", "R0_I", Scope::Two, [](C& c) -> double& { return c.run.initial.I.R0; }));
        t.push_back(number("initial", "N_E", Scope::Both, [](C& c) -> double& { return c.run.initial.N_E; }));
        t.push_back(number("initial", "N_I", Scope::Two, [](C& c) -> double& { return c.run.initial.N_I; }));
        t.push_back(integer("initial", "root_index", Scope::Both, [](C& c) -> int& { return c.run.initial.root_index; }));
        t.push_back(number("initial", "perturbation", Scope::Both, [](C& c) -> double& { return c.run.initial.perturbation; }));

        t.push_back(number("run", "t_end", Scope::Both, [](C& c) -> double& { return c.run.t_end; }));
        t.push_back(number("run", "output_interval", Scope::Both, [](C& c) -> double& { return c.run.output_interval; }));
        t.push_back(number("run", "cfl_safety", Scope::Both, [](C& c) -> double& { return c.run.cfl_safety; }));
        t.push_back(number("run", "dt_bar", Scope::Both, [](C& c) -> double& { return c.run.dt_bar; }));
        t.push_back(number("run", "N_cap", Scope::Both, [](C& c) -> double& { return c.run.blowup.N_cap; }));
        t.push_back(number("run", "dt_floor", Scope::Both, [](C& c) -> double& { return c.run.blowup.dt_floor; }));
        t.push_back(number("run", "self_drive_cap", Scope::Both, [](C& c) -> double& { return c.run.blowup.self_drive_cap; }));
        t.push_back({"run", "entropy", Scope::Both,
                     [](C& c, std::string_view v) { c.run.entropy = entropy_from_string(v); },
                     [](const C& c) { return to_string(c.run.entropy); }});
        t.push_back(integer("run", "entropy_root", Scope::Both, [](C& c) -> int& { return c.run.entropy_root; }));
        t.push_back(number("run", "window", Scope::Both, [](C& c) -> double& { return c.run.classify.window; }));
        t.push_back(number("run", "flatness", Scope::Both, [](C& c) -> double& { return c.run.classify.flatness; }));
        t.push_back(integer("run", "min_peaks", Scope::Both, [](C& c) -> int& { return c.run.classify.min_peaks; }));
        t.push_back(number("run", "spacing_cv", Scope::Both, [](C& c) -> double& { return c.run.classify.spacing_cv; }));
        t.push_back(number("run", "amplitude_decay", Scope::Both, [](C& c) -> double& { return c.run.classify.amplitude_decay; }));

        t.push_back(number_list("output", "snapshot_times", [](C& c) -> std::vector<double>& { return c.run.snapshot_times; }));

        t.push_back({"scan", "sweep", Scope::Both,
                     [](C& c, std::string_view v) {
                         if (!v.empty() && !is_sweepable(std::string(v)))
                             throw std::invalid_argument("expected one of b_EE, tau_E, b_IE, b_II, b_EI, tau_I");
                         c.sweep.parameter = std::string(v);
                     },
                     [](const C& c) { return c.sweep.parameter; }});
        t.push_back(number_list("scan", "sweep_values", [](C& c) -> std::vector<double>& { return c.sweep.values; }));
        Key range{"scan", "sweep_range", Scope::Both,
                  [](C& c, std::string_view v) {
                      const auto x = parse_number_list(v);
                      if (!x || x->size() != 3 || !((*x)[2] >= 1.0) || std::floor((*x)[2]) != (*x)[2])
                          throw std::invalid_argument("expected 'from, to, points'");
                      c.sweep.values = linspace((*x)[0], (*x)[1], static_cast<long long>((*x)[2]));
                  },
                  [](const C&) { return std::string(); }};
        range.rendered = false;
        t.push_back(std::move(range));
        t.push_back(integer("scan", "scan_points", Scope::Both, [](C& c) -> int& { return c.scan_points; }));
        return t;
    }();
    return table;
}

const Key* find_key(std::string_view section, std::string_view name) {
    for (const Key& k : key_table())
        if (k.section == section && k.name == name) return &k;
    return nullptr;
}

bool section_exists(std::string_view section) {
    for (const Key& k : key_table())
        if (k.section == section) return true;
    return false;
}

bool applies(const Key& k, int populations) {
    return k.scope == Scope::Both || (k.scope == Scope::One) == (populations == 1);
}

struct Entry {
    std::string section;
    std::string key;
    std::string value;
    int line = 0;  // 0: command-line override
    std::string origin() const {
        return line > 0 ? "at line " + std::to_string(line) : "in override '" + section + "." + key + "'";
    }
};

std::vector<Entry> read_document(const std::string& text) {
    std::vector<Entry> out;
    std::map<std::string, int> seen;
    std::istringstream in(text);
    std::string raw;
    std::string section;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string_view s = raw;
        const auto hash = s.find_first_of("#;");
        if (hash != std::string_view::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        if (s.front() == '[') {
            if (s.back() != ']') throw ConfigError("malformed section header at line " + std::to_string(line), line);
            section = std::string(trim(s.substr(1, s.size() - 2)));
            if (!section_exists(section))
                throw ConfigError("unknown section [" + section + "] at line " + std::to_string(line), line);
            continue;
        }
        const auto eq = s.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value' at line " + std::to_string(line), line);
        Entry e{section, std::string(trim(s.substr(0, eq))), std::string(trim(s.substr(eq + 1))), line};
        if (section.empty())
            throw ConfigError("key '" + e.key + "' outside any section at line " + std::to_string(line), line);
        const std::string full = section + "." + e.key;
        if (auto it = seen.find(full); it != seen.end()) {
            throw ConfigError("duplicate key '" + e.key + "' at line " + std::to_string(line) +
                                  " (first set at line " + std::to_string(it->second) + ")",
                              line);
        }
        seen[full] = line;
        out.push_back(std::move(e));
    }
    return out;
}

Entry read_override(const std::string& text) {
    const auto eq = text.find('=');
    const auto dot = text.find('.');
    if (eq == std::string::npos || dot == std::string::npos || dot > eq)
        throw ConfigError("override '" + text + "' must look like section.key=value", 0);
    Entry e{std::string(trim(std::string_view(text).substr(0, dot))),
            std::string(trim(std::string_view(text).substr(dot + 1, eq - dot - 1))),
            std::string(trim(std::string_view(text).substr(eq + 1))), 0};
    if (!section_exists(e.section))
        throw ConfigError("unknown section [" + e.section + "] in override '" + text + "'", 0);
    return e;
}

int populations_of(const std::vector<Entry>& entries, int current) {
    int pops = current;
    for (const Entry& e : entries) {
        if (e.section != "model" || e.key != "populations") continue;
        const auto x = parse_integer(e.value);
        if (!x || (*x != 1 && *x != 2))
            throw ConfigError("key 'populations' " + e.origin() + ": expected 1 or 2", e.line);
        pops = static_cast<int>(*x);
    }
    return pops;
}

void apply(ExperimentConfig& cfg, const Entry& e, int populations) {
    const Key* k = find_key(e.section, e.key);
    if (!k) {
        throw ConfigError("unknown key '" + e.key + "' " + e.origin() + " (section [" + e.section + "])",
                          e.line);
    }
    if (!applies(*k, populations)) {
        throw ConfigError("key '" + e.key + "' " + e.origin() + " needs populations = " +
                              (k->scope == Scope::One ? "1" : "2"),
                          e.line);
    }
    try {
        k->set(cfg, e.value);
    } catch (const std::invalid_argument& err) {
        throw ConfigError("cannot read '" + e.value + "' for key '" + e.key + "' " + e.origin() + ": " +
                              err.what(),
                          e.line);
    }
}

const Entry* find_entry(const std::vector<Entry>& entries, std::string_view section, std::string_view key) {
    const Entry* found = nullptr;
    for (const Entry& e : entries)
        if (e.section == section && e.key == key) found = &e;
    return found;
}

void check_required(const ExperimentConfig& cfg, const std::vector<Entry>& entries) {
    if (cfg.run.initial.kind == InitialKind::Stationary) {
        const Entry* kind = find_entry(entries, "initial", "kind");
        const int line = kind ? kind->line : 0;
        if (!find_entry(entries, "initial", "N_E"))
            throw ConfigError("missing required key 'N_E' in [initial] (kind = stationary)", line);
        if (cfg.run.populations == 2 && !find_entry(entries, "initial", "N_I"))
            throw ConfigError("missing required key 'N_I' in [initial] (kind = stationary)", line);
    }
    if (!cfg.sweep.values.empty() && cfg.sweep.parameter.empty()) {
        const Entry* v = find_entry(entries, "scan", "sweep_values");
        if (!v) v = find_entry(entries, "scan", "sweep_range");
        throw ConfigError("missing required key 'sweep' in [scan] (sweep values given)", v ? v->line : 0);
    }
    if (find_entry(entries, "scan", "sweep_values") && find_entry(entries, "scan", "sweep_range")) {
        const Entry* r = find_entry(entries, "scan", "sweep_range");
        throw ConfigError("give either sweep_values or sweep_range, not both (" + r->origin() + ")", r->line);
    }
}

}  // namespace

ParsedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides) {
    std::vector<Entry> entries = read_document(text);
    for (const auto& o : overrides) entries.push_back(read_override(o));

    ParsedConfig out;
    const int pops = populations_of(entries, out.config.run.populations);
    out.config.run.populations = pops;  // shared keys go to the active population
    for (const Entry& e : entries) apply(out.config, e, pops);
    check_required(out.config, entries);

    for (const Key& k : key_table()) {
        if (!k.rendered || !applies(k, pops)) continue;
        if (find_entry(entries, k.section, k.name)) continue;
        if (k.name == "sweep_values" && find_entry(entries, "scan", "sweep_range")) continue;
        out.defaulted.push_back(k.section + "." + k.name);
    }
    return out;
}

ExperimentConfig apply_overrides(ExperimentConfig cfg, const std::vector<std::string>& overrides) {
    std::vector<Entry> entries;
    for (const auto& o : overrides) entries.push_back(read_override(o));
    const int pops = populations_of(entries, cfg.run.populations);
    cfg.run.populations = pops;
    for (const Entry& e : entries) apply(cfg, e, pops);
    return cfg;
}

std::string render_config(const ExperimentConfig& cfg) {
    std::ostringstream out;
    std::string section;
    for (const Key& k : key_table()) {
        if (!k.rendered || !applies(k, cfg.run.populations)) continue;
        if (k.section != section) {
            if (!section.empty()) out << '\n';
            section = k.section;
            out << '[' << section << "]\n";
        }
        out << k.name << " = " << k.get(cfg) << '\n';
    }
    return out.str();
}

void validate_experiment(const ExperimentConfig& cfg) {
    validate_run_config(cfg.run);
    std::vector<std::string> bad;
    if (cfg.scan_points < 64) bad.push_back("scan_points must be >= 64");
    if (!cfg.sweep.parameter.empty() && !is_sweepable(cfg.sweep.parameter))
        bad.push_back("cannot sweep '" + cfg.sweep.parameter + "'");
    if (!cfg.sweep.parameter.empty() && cfg.run.populations != 2)
        bad.push_back("sweeps need populations = 2");
    if (!bad.empty()) throw ParameterError(bad);
}

}  // namespace nnlif
