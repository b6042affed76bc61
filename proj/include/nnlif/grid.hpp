#pragma once

// Uniform voltage mesh, density fields on it, and the two families of initial data.

#include <cstddef>
#include <span>
#include <vector>

#include "nnlif/params.hpp"

namespace nnlif {

/// Uniform mesh on [-v_left, V_F].
///
/// The spacing is snapped so that both V_F and V_R are mesh nodes; the effective
/// left truncation therefore differs slightly from the requested one.
class Grid {
public:
    static constexpr double kDefaultVLeft = 6.0;
    static constexpr std::size_t kDefaultCells = 1000;

    Grid(double V_F, double V_R, double v_left = kDefaultVLeft,
         std::size_t n_cells = kDefaultCells);

    std::size_t size() const noexcept { return n_; }
    double dv() const noexcept { return dv_; }
    double v_left() const noexcept { return v_left_; }
    double V_F() const noexcept { return V_F_; }
    double V_R() const noexcept { return V_R_; }
    double v(std::size_t j) const noexcept { return -v_left_ + static_cast<double>(j) * dv_; }
    std::size_t reset_index() const noexcept { return reset_index_; }
    std::size_t nearest_index(double v) const;

private:
    double V_F_;
    double V_R_;
    double v_left_;
    double dv_;
    std::size_t n_;
    std::size_t reset_index_;
};

/// Probability density sampled at the grid nodes (units 1/voltage).
class DensityField {
public:
    DensityField() = default;
    explicit DensityField(std::size_t n, double value = 0.0) : values_(n, value) {}
    explicit DensityField(std::vector<double> values) : values_(std::move(values)) {}

    std::size_t size() const noexcept { return values_.size(); }
    double& operator[](std::size_t j) { return values_[j]; }
    double operator[](std::size_t j) const { return values_[j]; }
    std::span<double> values() noexcept { return values_; }
    std::span<const double> values() const noexcept { return values_; }
    std::vector<double>& raw() noexcept { return values_; }
    const std::vector<double>& raw() const noexcept { return values_; }

    friend bool operator==(const DensityField&, const DensityField&) = default;

private:
    std::vector<double> values_;
};

/// Composite trapezoidal rule over the whole grid.
double total_mass(std::span<const double> f, const Grid& grid);
inline double total_mass(const DensityField& f, const Grid& grid) {
    return total_mass(f.values(), grid);
}

/// Trapezoidal L1 norm of the difference of two fields.
double l1_distance(const DensityField& a, const DensityField& b, const Grid& grid);

/// Gaussian bump centred at v0 with width sigma0, scaled so that its discrete mass
/// equals `mass`. Widths below the mesh spacing are projected by cell averages, so a
/// sub-grid spike lands on the node(s) nearest v0 with the requested mass.
DensityField gaussian_initial(const Grid& grid, double v0, double sigma0, double mass = 1.0);

/// Closed-form stationary profile for firing rate N under drive (V0, a):
///   rho(v) = (N/a) exp(-(v-V0)^2/2a) * int_{max(v,V_R)}^{V_F} exp((w-V0)^2/2a) dw.
DensityField stationary_profile(const Grid& grid, double N, Drive drive);

/// Profile of population `pop` at the rates (N_E, N_I).
DensityField stationary_initial(const Grid& grid, double N_E, double N_I,
                                const ModelParameters& p, Population pop);
DensityField stationary_initial(const Grid& grid, double N, const OnePopParameters& p);

}  // namespace nnlif
