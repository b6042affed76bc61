#include "nnlif/spatial.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace nnlif {

double drift_at(double v, double N_E_d, double N_I_d, const ModelParameters& p, Population pop) {
    return -v + drive(p, pop, N_E_d, N_I_d).V0;
}

double drift_at(double v, double N_d, const OnePopParameters& p) {
    return -v + drive(p, N_d).V0;
}

double diffusion_coeff(double N_E_d, double N_I_d, const ModelParameters& p, Population pop) {
    return drive(p, pop, N_E_d, N_I_d).a;
}

double diffusion_coeff(double N_d, const OnePopParameters& p) { return drive(p, N_d).a; }

double max_abs_drift(double V0, const Grid& grid) {
    return std::max(std::abs(grid.v_left() + V0), std::abs(V0 - grid.V_F()));
}

namespace {

constexpr int kGhost = 3;

// Fifth-order WENO value at the right face of c from the left-biased stencil (a..e).
inline double weno_left(double a, double b, double c, double d, double e) {
    const double q0 = (2.0 * a - 7.0 * b + 11.0 * c) / 6.0;
    const double q1 = (-b + 5.0 * c + 2.0 * d) / 6.0;
    const double q2 = (2.0 * c + 5.0 * d - e) / 6.0;
    const double t0 = a - 2.0 * b + c;
    const double t1 = b - 2.0 * c + d;
    const double t2 = c - 2.0 * d + e;
    const double s0 = a - 4.0 * b + 3.0 * c;
    const double s1 = b - d;
    const double s2 = 3.0 * c - 4.0 * d + e;
    const double beta0 = 13.0 / 12.0 * t0 * t0 + 0.25 * s0 * s0;
    const double beta1 = 13.0 / 12.0 * t1 * t1 + 0.25 * s1 * s1;
    const double beta2 = 13.0 / 12.0 * t2 * t2 + 0.25 * s2 * s2;
    const double g0 = kWenoEpsilon + beta0;
    const double g1 = kWenoEpsilon + beta1;
    const double g2 = kWenoEpsilon + beta2;
    const double w0 = 0.1 / (g0 * g0);
    const double w1 = 0.6 / (g1 * g1);
    const double w2 = 0.3 / (g2 * g2);
    return (w0 * q0 + w1 * q1 + w2 * q2) / (w0 + w1 + w2);
}

struct Scratch {
    std::vector<double> plus;
    std::vector<double> minus;
    std::vector<double> face;
    std::vector<double> velocity;
};

Scratch& scratch() {
    thread_local Scratch s;
    return s;
}

// Fills padded split fluxes, reconstructs every face flux and differences them.
template <class Velocity>
BoundaryFlux weno_core(std::span<const double> rho, Velocity&& h, double alpha, double dv,
                       std::span<double> out, GhostClosure closure) {
    const std::size_t n = rho.size();
    if (out.size() != n) throw std::invalid_argument("weno5_advection: size mismatch");
    for (double x : rho) {
        if (std::isnan(x)) throw std::invalid_argument("weno5_advection: NaN in density");
    }
    auto& s = scratch();
    const std::size_t padded = n + 2 * kGhost;
    s.plus.assign(padded, 0.0);
    s.minus.assign(padded, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double f = h(j) * rho[j];
        const double dissip = alpha * rho[j];
        s.plus[j + kGhost] = 0.5 * (f + dissip);
        s.minus[j + kGhost] = 0.5 * (f - dissip);
    }
    if (closure == GhostClosure::Periodic) {
        for (int g = 0; g < kGhost; ++g) {
            s.plus[g] = s.plus[n + g];
            s.minus[g] = s.minus[n + g];
            s.plus[n + kGhost + g] = s.plus[kGhost + g];
            s.minus[n + kGhost + g] = s.minus[kGhost + g];
        }
    }

    // face k sits between node k and node k+1
    const std::size_t faces = closure == GhostClosure::Periodic ? n : n - 1;
    s.face.resize(faces);
    const double* fp = s.plus.data() + kGhost;
    const double* fm = s.minus.data() + kGhost;
    for (std::size_t k = 0; k < faces; ++k) {
        const auto i = static_cast<std::ptrdiff_t>(k);
        const double up = weno_left(fp[i - 2], fp[i - 1], fp[i], fp[i + 1], fp[i + 2]);
        const double down = weno_left(fm[i + 3], fm[i + 2], fm[i + 1], fm[i], fm[i - 1]);
        s.face[k] = up + down;
    }

    const double inv_dv = 1.0 / dv;
    if (closure == GhostClosure::Periodic) {
        for (std::size_t j = 0; j < n; ++j) {
            const double left = s.face[j == 0 ? n - 1 : j - 1];
            out[j] = -(s.face[j] - left) * inv_dv;
        }
        return {};
    }
    out[0] = 0.0;
    out[n - 1] = 0.0;
    for (std::size_t j = 1; j + 1 < n; ++j) out[j] = -(s.face[j] - s.face[j - 1]) * inv_dv;
    return {s.face[n - 2], -s.face[0]};
}

}  // namespace

BoundaryFlux weno5_advection(std::span<const double> rho, double V0, const Grid& grid,
                             std::span<double> out, GhostClosure closure) {
    const double alpha = max_abs_drift(V0, grid);
    const double v_lo = -grid.v_left();
    const double dv = grid.dv();
    return weno_core(
        rho, [=](std::size_t j) { return -(v_lo + static_cast<double>(j) * dv) + V0; }, alpha,
        dv, out, closure);
}

BoundaryFlux weno5_advection(std::span<const double> rho, std::span<const double> velocity,
                             double dv, std::span<double> out, GhostClosure closure) {
    if (velocity.size() != rho.size()) throw std::invalid_argument("weno5_advection: size mismatch");
    double alpha = 0.0;
    for (double h : velocity) alpha = std::max(alpha, std::abs(h));
    return weno_core(rho, [&](std::size_t j) { return velocity[j]; }, alpha, dv, out, closure);
}

void diffusion_term(std::span<const double> rho, double a, double dv, std::span<double> out,
                    GhostClosure closure) {
    const std::size_t n = rho.size();
    const double c = a / (dv * dv);
    if (closure == GhostClosure::Periodic) {
        for (std::size_t j = 0; j < n; ++j) {
            const double l = rho[j == 0 ? n - 1 : j - 1];
            const double r = rho[j + 1 == n ? 0 : j + 1];
            out[j] += c * (l - 2.0 * rho[j] + r);
        }
        return;
    }
    for (std::size_t j = 1; j + 1 < n; ++j) {
        out[j] += c * (rho[j - 1] - 2.0 * rho[j] + rho[j + 1]);
    }
}

void deposit_reset(std::span<double> rhs, double M, const Grid& grid) {
    rhs[grid.reset_index()] += M / grid.dv();
}

double extract_firing_rate(std::span<const double> rho, double a, const Grid& grid,
                           std::size_t* clamp_count) {
    const std::size_t n = rho.size();
    const double slope = (3.0 * rho[n - 1] - 4.0 * rho[n - 2] + rho[n - 3]) / (2.0 * grid.dv());
    const double N = -a * slope + 0.0;  // no negative zero
    if (N < 0.0) {
        if (clamp_count) ++*clamp_count;
        return 0.0;
    }
    return N;
}

SpatialOperatorInput make_input(std::span<const double> field, double N_E_delayed,
                                double N_I_delayed, double M, const ModelParameters& p,
                                Population pop, const Grid& grid) {
    return {field, drive(p, pop, N_E_delayed, N_I_delayed), M, &grid};
}

SpatialOperatorInput make_input(std::span<const double> field, double N_delayed, double M,
                                const OnePopParameters& p, const Grid& grid) {
    return {field, drive(p, N_delayed), M, &grid};
}

BoundaryFlux assemble_rhs(const SpatialOperatorInput& in, std::span<double> out) {
    const Grid& grid = *in.grid;
    const auto rho = in.field;
    const std::size_t n = rho.size();
    BoundaryFlux flux = weno5_advection(rho, in.drive.V0, grid, out, GhostClosure::Zero);
    diffusion_term(rho, in.drive.a, grid.dv(), out, GhostClosure::Zero);
    deposit_reset(out, in.M, grid);
    out[0] = 0.0;
    out[n - 1] = 0.0;
    flux.right += in.drive.a * (rho[n - 2] - rho[n - 1]) / grid.dv();
    flux.left += in.drive.a * (rho[1] - rho[0]) / grid.dv();
    return flux;
}

RhsField assemble_rhs(const SpatialOperatorInput& in) {
    RhsField rhs;
    rhs.values.assign(in.field.size(), 0.0);
    rhs.flux = assemble_rhs(in, rhs.values);
    return rhs;
}

}  // namespace nnlif
