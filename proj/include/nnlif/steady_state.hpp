#pragma once

// Stationary solutions of the network: reduced integrals, the fixed-point map,
// root counting, parameter sweeps, uniqueness bounds and the blow-up criterion.

#include <optional>
#include <string>
#include <vector>

#include "nnlif/grid.hpp"
#include "nnlif/params.hpp"

namespace nnlif {

/// Drive and diffusion in the scaled variables wF = (V_F - V0)/sqrt(a), wR = (V_R - V0)/sqrt(a).
struct ReducedVariables {
    double V0 = 0.0;
    double a = 1.0;
    double wF = 0.0;
    double wR = 0.0;
};

ReducedVariables reduce(Drive d, double V_F, double V_R);

/// I(wF, wR) = int_0^inf exp(-s^2/2) (exp(s wF) - exp(s wR)) / s ds.
/// Returns +inf when the value exceeds the double range (wF beyond ~37).
double integral_I(double wF, double wR);
double integral_I(double N_E, double N_I, const ModelParameters& p, Population pop);
double integral_I(double N, const OnePopParameters& p);

/// Same quantity from the nested form
///   int_{-inf}^{wF} exp(-z^2/2) int_{max(z,wR)}^{wF} exp(u^2/2) du dz,
/// computed with nested adaptive Simpson and lower truncation z >= wF - 40.
/// Kept independent of integral_I so that each can check the other.
double integral_I_bruteforce(double wF, double wR);
double integral_I_bruteforce(double N_E, double N_I, const ModelParameters& p, Population pop);

/// J(wF, wR) = int_0^inf exp(-s^2/2) (exp(s wF) - exp(s wR)) ds, the rate of change of I
/// when wF and wR are shifted together.
double integral_J(double wF, double wR);

/// The unique N_I in (0, 1/tau_I) with N_I (tau_I + I_2(N_E, N_I)) = 1.
double solve_inner_NI(double N_E, const ModelParameters& p, double tol = 1e-12);

/// F(N_E) = N_E (tau_E + I_1(N_E, N_I(N_E))); steady states are the solutions of F = 1.
double F_of_NE(double N_E, const ModelParameters& p);
/// One population: F(N) = N (tau + I(N)).
double F_of_N(double N, const OnePopParameters& p);

struct SteadyStateSolution {
    double N_E = 0.0;
    double N_I = 0.0;  // unused for one population
    double R_E = 0.0;
    double R_I = 0.0;
    DensityField profile_E;
    DensityField profile_I;
    double residual = 0.0;  // max_alpha |1 - N_alpha (tau_alpha + I_alpha)|
    bool one_population = false;
};

struct SteadyStates {
    std::vector<SteadyStateSolution> roots;  // ascending in N_E
    bool tangency_warning = false;
    std::vector<std::string> warnings;
};

inline constexpr int kDefaultScanPoints = 512;
/// Upper end of the rate scan when there is no refractory bound 1/tau.
inline constexpr double kUnboundedRateCap = 200.0;

SteadyStates find_steady_states(const ModelParameters& p, int scan_points, const Grid& grid);
SteadyStates find_steady_states(const ModelParameters& p, int scan_points = kDefaultScanPoints);
SteadyStates find_steady_states(const OnePopParameters& p, int scan_points, const Grid& grid);
SteadyStates find_steady_states(const OnePopParameters& p,
                                int scan_points = kDefaultScanPoints);

/// Parameters a bifurcation scan may sweep.
bool is_sweepable(const std::string& name);
ModelParameters with_parameter(ModelParameters p, const std::string& name, double value);

struct BifurcationPoint {
    double value = 0.0;
    std::vector<double> roots_NE;
    std::vector<double> roots_NI;
    bool tangency_warning = false;
    std::vector<double> curve_NE;  // optional F(N_E) samples
    std::vector<double> curve_F;
};

struct BifurcationScan {
    std::string parameter;
    std::vector<BifurcationPoint> points;
};

BifurcationScan bifurcation_scan(const ModelParameters& p, const std::string& sweep,
                                 const std::vector<double>& values,
                                 int scan_points = kDefaultScanPoints,
                                 bool keep_curves = false);

struct UniquenessBounds {
    double A = 0.0;
    double B = 0.0;
    bool sufficient_unique = false;  // A >= 0 forces F to be increasing
};

/// Endpoint bounds on the slope factor of F'(N_E) for constant diffusion a_alpha = d_alpha.
UniquenessBounds uniqueness_bounds(const ModelParameters& p);

struct BlowupCriterion {
    bool satisfied = false;
    double best_mu = 0.0;
    double margin = 0.0;  // max over mu of b mu e^{-mu V_F} int e^{mu v} rho dv
};

std::vector<double> default_mu_grid();

/// Concentration test: the initial excitatory density lies close enough to V_F
/// that int e^{mu v} rho dv >= e^{mu V_F} / (b_EE mu) for some mu in the grid.
BlowupCriterion blowup_criterion(const DensityField& rho0, const Grid& grid, double b_EE,
                                 const std::vector<double>& mu_grid = default_mu_grid());

}  // namespace nnlif
