#include "nnlif/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "nnlif/quadrature.hpp"

namespace nnlif {

Grid::Grid(double V_F, double V_R, double v_left, std::size_t n_cells)
    : V_F_(V_F), V_R_(V_R), n_(n_cells) {
    if (!(V_R < V_F)) throw std::invalid_argument("grid: V_R must be < V_F");
    if (!(v_left > -V_R)) throw std::invalid_argument("grid: -v_left must lie below V_R");
    if (n_cells < 8) throw std::invalid_argument("grid: need at least 8 nodes");

    const double span = V_F + v_left;
    const double nominal = span / static_cast<double>(n_cells - 1);
    auto above_reset = static_cast<std::size_t>(std::llround((V_F - V_R) / nominal));
    above_reset = std::clamp<std::size_t>(above_reset, 1, n_cells - 3);
    dv_ = (V_F - V_R) / static_cast<double>(above_reset);
    v_left_ = static_cast<double>(n_cells - 1) * dv_ - V_F;
    reset_index_ = n_cells - 1 - above_reset;
    if (!(dv_ > 0.0)) throw std::invalid_argument("grid: non-positive spacing");
}

std::size_t Grid::nearest_index(double v) const {
    const double x = (v + v_left_) / dv_;
    if (x <= 0.0) return 0;
    return std::min(n_ - 1, static_cast<std::size_t>(std::llround(x)));
}

double total_mass(std::span<const double> f, const Grid& grid) {
    if (f.empty()) return 0.0;
    double sum = 0.5 * (f.front() + f.back());
    for (std::size_t j = 1; j + 1 < f.size(); ++j) sum += f[j];
    return sum * grid.dv();
}

double l1_distance(const DensityField& a, const DensityField& b, const Grid& grid) {
    std::vector<double> diff(a.size());
    for (std::size_t j = 0; j < a.size(); ++j) diff[j] = std::abs(a[j] - b[j]);
    return total_mass(diff, grid);
}

namespace {

// Probability that a normal(v0, sigma) variable lands in [lo, hi].
double normal_cell_mass(double lo, double hi, double v0, double sigma) {
    const double s = 1.0 / (std::sqrt(2.0) * sigma);
    const double a = (lo - v0) * s;
    const double b = (hi - v0) * s;
    if (a >= 0.0) return 0.5 * (std::erfc(a) - std::erfc(b));
    if (b <= 0.0) return 0.5 * (std::erfc(-b) - std::erfc(-a));
    return 0.5 * (std::erf(b) - std::erf(a));
}

}  // namespace

DensityField gaussian_initial(const Grid& grid, double v0, double sigma0, double mass) {
    if (!(sigma0 > 0.0)) throw std::invalid_argument("gaussian_initial: sigma0 must be > 0");
    if (!(v0 < grid.V_F())) throw std::invalid_argument("gaussian_initial: v0 must be < V_F");
    if (!(mass > 0.0 && mass <= 1.0))
        throw std::invalid_argument("gaussian_initial: mass must lie in (0, 1]");

    const std::size_t n = grid.size();
    const double dv = grid.dv();
    DensityField field(n);
    const bool resolved = sigma0 >= dv;
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double v = grid.v(j);
        if (resolved) {
            const double z = (v - v0) / sigma0;
            field[j] = std::exp(-0.5 * z * z);
        } else {
            field[j] = normal_cell_mass(v - 0.5 * dv, v + 0.5 * dv, v0, sigma0) / dv;
        }
    }
    field[n - 1] = 0.0;

    const double raw = total_mass(field, grid);
    if (!(raw > 0.0) || !std::isfinite(raw)) {
        throw std::invalid_argument(
            "gaussian_initial: no grid node carries mass (v0 outside the mesh or sigma0 "
            "far below the spacing); use a finer grid");
    }
    const double scale = mass / raw;
    for (double& x : field.raw()) x *= scale;
    return field;
}

DensityField stationary_profile(const Grid& grid, double N, Drive d) {
    if (!(N >= 0.0)) throw std::invalid_argument("stationary_profile: N must be >= 0");
    if (!(d.a > 0.0)) throw std::invalid_argument("stationary_profile: a must be > 0");
    const std::size_t n = grid.size();
    DensityField field(n);
    const double two_a = 2.0 * d.a;
    const double V_F = grid.V_F();
    const double V_R = grid.V_R();
    for (std::size_t j = 0; j + 1 < n; ++j) {
        const double v = grid.v(j);
        // (w - V0)^2 - (v - V0)^2 factored; the difference of squares jitters and
        // keeps the adaptive rule subdividing for strong drives
        auto integrand = [&](double w) {
            return std::exp((w - v) * (w + v - 2.0 * d.V0) / two_a);
        };
        const double inner =
            integrate_adaptive(integrand, std::max(v, V_R), V_F, 1e-300, 1e-12).value;
        field[j] = N / d.a * inner;
        if (!std::isfinite(field[j])) {
            throw NumericalError("stationary profile overflows at node " + std::to_string(j) +
                                 " (v = " + std::to_string(v) + ")");
        }
    }
    field[n - 1] = 0.0;
    return field;
}

DensityField stationary_initial(const Grid& grid, double N_E, double N_I,
                                const ModelParameters& p, Population pop) {
    if (!(N_E >= 0.0 && N_I >= 0.0))
        throw std::invalid_argument("stationary_initial: rates must be >= 0");
    const double N = pop == Population::E ? N_E : N_I;
    return stationary_profile(grid, N, drive(p, pop, N_E, N_I));
}

DensityField stationary_initial(const Grid& grid, double N, const OnePopParameters& p) {
    return stationary_profile(grid, N, drive(p, N));
}

}  // namespace nnlif
