#pragma once

// Semi-discrete right-hand side of the Fokker-Planck equation for one population:
// WENO5 flux-split advection, central diffusion, the reset source at V_R and the
// firing-rate read-out at V_F.

#include <cstddef>
#include <span>
#include <vector>

#include "nnlif/grid.hpp"
#include "nnlif/params.hpp"

namespace nnlif {

/// h(v) = -v + V0 for the drive of population `pop` at the delayed rates.
double drift_at(double v, double N_E_d, double N_I_d, const ModelParameters& p, Population pop);
double drift_at(double v, double N_d, const OnePopParameters& p);

/// a = d_alpha + d_E^alpha N_E + d_I^alpha N_I (one population: d0 + d1 N).
double diffusion_coeff(double N_E_d, double N_I_d, const ModelParameters& p, Population pop);
double diffusion_coeff(double N_d, const OnePopParameters& p);

/// Values assumed outside the mesh by the stencils.
enum class GhostClosure {
    Zero,      // density vanishes beyond both ends
    Periodic,  // node n is node 0 (test harnesses only)
};

inline constexpr double kWenoEpsilon = 1e-6;

/// Largest |h| on the mesh; h is affine in v so the maximum sits at an end.
double max_abs_drift(double V0, const Grid& grid);

/// Fluxes leaving the interior through the two ends during one rhs evaluation.
struct BoundaryFlux {
    double right = 0.0;  // through V_F: numerical advective flux plus diffusive flux
    double left = 0.0;   // through -v_left (should stay negligible)
};

/// Per-node time derivative plus the boundary fluxes it implies.
struct RhsField {
    std::vector<double> values;
    BoundaryFlux flux;
};

/// WENO5 with Lax-Friedrichs splitting f± = (h rho ± alpha rho)/2, alpha = max|h|.
/// Writes -d(h rho)/dv into `out` for the interior nodes (all nodes when periodic)
/// and returns the face fluxes at the two ends of the interior.
BoundaryFlux weno5_advection(std::span<const double> rho, double V0, const Grid& grid,
                             std::span<double> out, GhostClosure closure = GhostClosure::Zero);

/// Same operator with an arbitrary node-wise velocity on a uniform mesh of spacing dv.
BoundaryFlux weno5_advection(std::span<const double> rho, std::span<const double> velocity,
                             double dv, std::span<double> out, GhostClosure closure);

/// Adds a (rho_{j-1} - 2 rho_j + rho_{j+1}) / dv^2 to `out` on the interior nodes
/// (all nodes when periodic).
void diffusion_term(std::span<const double> rho, double a, double dv, std::span<double> out,
                    GhostClosure closure = GhostClosure::Zero);

/// Adds M / dv at the V_R node.
void deposit_reset(std::span<double> rhs, double M, const Grid& grid);

/// N = -a d(rho)/dv at V_F from the one-sided second-order stencil; negative values are
/// clamped to 0 and counted in `clamp_count` when given.
double extract_firing_rate(std::span<const double> rho, double a, const Grid& grid,
                           std::size_t* clamp_count = nullptr);

struct SpatialOperatorInput {
    std::span<const double> field;
    Drive drive;     // mean drive and diffusion at the delayed rates
    double M = 0.0;  // reset inflow
    const Grid* grid = nullptr;
};

SpatialOperatorInput make_input(std::span<const double> field, double N_E_delayed,
                                double N_I_delayed, double M, const ModelParameters& p,
                                Population pop, const Grid& grid);
SpatialOperatorInput make_input(std::span<const double> field, double N_delayed, double M,
                                const OnePopParameters& p, const Grid& grid);

/// Advection + diffusion + reset deposit; the derivative at both end nodes is zero.
RhsField assemble_rhs(const SpatialOperatorInput& input);

/// Allocation-free variant used by the time stepper.
BoundaryFlux assemble_rhs(const SpatialOperatorInput& input, std::span<double> out);

}  // namespace nnlif
