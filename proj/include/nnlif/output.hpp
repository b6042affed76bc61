#pragma once

// Plot-ready text output: comma-separated tables with a header line and numbers
// at 17 significant digits, plus a key = value run summary.
//
//   timeseries.csv      t,N_E,N_I,R_E,R_I,mass_E,mass_I,entropy
//   <profile>.csv       v,rho_E,rho_I   (snapshots, final state, steady profiles)
//   bifurcation.csv     sweep_value,root_index,N_E,N_I
//   summary.txt         key = value, in insertion order
//   config.txt          the resolved configuration
//
// Columns that do not apply (one population, no entropy reference) hold "nan".

#include <filesystem>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "nnlif/network.hpp"

namespace nnlif {

class OutputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ProfileFile {
    std::string name;  // file stem
    std::vector<double> v;
    std::vector<double> rho_E;
    std::vector<double> rho_I;  // empty for one population
};

struct BifurcationRow {
    double sweep_value = 0.0;  // NaN for a single parameter set
    int root_index = 0;
    double N_E = 0.0;
    double N_I = 0.0;
};

struct OutputBundle {
    bool has_series = false;
    std::vector<Sample> series;
    std::vector<ProfileFile> profiles;
    bool has_bifurcation = false;
    std::vector<BifurcationRow> bifurcation;
    std::vector<std::pair<std::string, std::string>> summary;
    std::string config_text;
    std::vector<std::pair<std::string, OutputBundle>> children;  // written to subdirectories

    void note(std::string key, std::string value) {
        summary.emplace_back(std::move(key), std::move(value));
    }
    void note(std::string key, double value);
};

std::string render_timeseries(const std::vector<Sample>& samples);
std::string render_profile(const ProfileFile& profile);
std::string render_bifurcation(const std::vector<BifurcationRow>& rows);
std::string render_summary(const std::vector<std::pair<std::string, std::string>>& summary);

/// Snapshot with the mesh it lives on, named snapshot_<index> (three digits).
ProfileFile snapshot_profile(const Snapshot& s, const std::vector<double>& v, std::size_t index);

/// Creates `dir` and its parents as needed; throws OutputError on any failure.
void write_bundle(const OutputBundle& bundle, const std::filesystem::path& dir);

}  // namespace nnlif
