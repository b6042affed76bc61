#include "nnlif/output.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>

#include "nnlif/format.hpp"

namespace nnlif {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void row(std::string& out, std::initializer_list<double> values) {
    bool first = true;
    for (double x : values) {
        if (!first) out += ',';
        first = false;
        out += format_number(x);
    }
    out += '\n';
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw OutputError("cannot open " + path.string() + ": " + std::strerror(errno));
    f.write(text.data(), static_cast<std::streamsize>(text.size()));
    f.close();
    if (!f) throw OutputError("cannot write " + path.string() + ": " + std::strerror(errno));
}

}  // namespace

void OutputBundle::note(std::string key, double value) {
    summary.emplace_back(std::move(key), format_number(value));
}

std::string render_timeseries(const std::vector<Sample>& samples) {
    std::string out = "t,N_E,N_I,R_E,R_I,mass_E,mass_I,entropy\n";
    for (const Sample& s : samples)
        row(out, {s.t, s.N_E, s.N_I, s.R_E, s.R_I, s.mass_E, s.mass_I, s.entropy});
    return out;
}

std::string render_profile(const ProfileFile& p) {
    if (p.rho_E.size() != p.v.size() || (!p.rho_I.empty() && p.rho_I.size() != p.v.size()))
        throw std::invalid_argument("profile '" + p.name + "' has columns of different length");
    std::string out = "v,rho_E,rho_I\n";
    for (std::size_t j = 0; j < p.v.size(); ++j)
        row(out, {p.v[j], p.rho_E[j], p.rho_I.empty() ? kNaN : p.rho_I[j]});
    return out;
}

std::string render_bifurcation(const std::vector<BifurcationRow>& rows) {
    std::string out = "sweep_value,root_index,N_E,N_I\n";
    for (const auto& r : rows) {
        out += format_number(r.sweep_value) + ',' + std::to_string(r.root_index) + ',' +
               format_number(r.N_E) + ',' + format_number(r.N_I) + '\n';
    }
    return out;
}

std::string render_summary(const std::vector<std::pair<std::string, std::string>>& summary) {
    std::string out;
    for (const auto& [k, v] : summary) out += k + " = " + v + '\n';
    return out;
}

ProfileFile snapshot_profile(const Snapshot& s, const std::vector<double>& v, std::size_t index) {
    char name[32];
    std::snprintf(name, sizeof name, "snapshot_%03zu", index);
    return {name, v, s.rho_E, s.rho_I};
}

void write_bundle(const OutputBundle& b, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw OutputError("cannot create " + dir.string() + ": " + ec.message());

    if (b.has_series) write_file(dir / "timeseries.csv", render_timeseries(b.series));
    for (const auto& p : b.profiles) write_file(dir / (p.name + ".csv"), render_profile(p));
    if (b.has_bifurcation) write_file(dir / "bifurcation.csv", render_bifurcation(b.bifurcation));
    if (!b.config_text.empty()) write_file(dir / "config.txt", b.config_text);
    write_file(dir / "summary.txt", render_summary(b.summary));
    for (const auto& [name, child] : b.children) write_bundle(child, dir / name);
}

}  // namespace nnlif
