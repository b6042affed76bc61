#include "nnlif/steady_state.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>

#include "nnlif/quadrature.hpp"

namespace nnlif {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSeriesSwitch = 1e-3;
// Past the peak of exp(-s^2/2 + s wF) the integrand falls below e^{-50} of its maximum
// within this distance.
constexpr double kTailWidth = 10.0;
// exp(wF^2 / 2) overflows beyond this.
constexpr double kOverflowW = 37.5;
// Gauss-Kronrod error estimates stall near 1e-12 relative from round-off.
constexpr double kTailRelTol = 1e-11;

double effective_tau(double tau, RefractoryMode mode) {
    return mode == RefractoryMode::None ? 0.0 : tau;
}

// int_0^h exp(-s^2/2) (e^{s wF} - e^{s wR}) / s ds from five Taylor terms of the
// bracket and three of the Gaussian, integrated exactly.
double series_head(double wF, double wR, double h) {
    double total = 0.0;
    double pF = 1.0;
    double pR = 1.0;
    double factorial = 1.0;
    for (int k = 1; k <= 5; ++k) {
        pF *= wF;
        pR *= wR;
        factorial *= k;
        const double c = (pF - pR) / factorial;
        const double hk = std::pow(h, k);
        total += c * (hk / k - hk * h * h / (2.0 * (k + 2)) +
                      hk * h * h * h * h / (8.0 * (k + 4)));
    }
    return total;
}

// Keeps |w| h small so that the five-term head stays accurate for strong drives.
double series_switch(double wF, double wR) {
    return std::min(kSeriesSwitch, 0.01 / std::max({std::abs(wF), std::abs(wR), 1.0}));
}

template <class Integrand>
double gaussian_weighted_tail(Integrand&& g, double wF, double from) {
    const double peak = std::max(wF, from);
    // for wF < 0 the factor e^{s wF} alone reaches e^{-50} at s = 50 / |wF|
    const double width = wF < -5.0 ? 50.0 / -wF : kTailWidth;
    const double s_max = peak + width;
    // a sliver [from, peak] stalls the Gauss-Kronrod error estimate, so split only
    // when the peak is a Gaussian width inside
    if (peak < from + 1.0) return integrate_adaptive(g, from, s_max, 1e-300, kTailRelTol).value;
    return integrate_adaptive(g, from, peak, 1e-300, kTailRelTol).value +
           integrate_adaptive(g, peak, s_max, 1e-300, kTailRelTol).value;
}

}  // namespace

ReducedVariables reduce(Drive d, double V_F, double V_R) {
    const double root_a = std::sqrt(d.a);
    return {d.V0, d.a, (V_F - d.V0) / root_a, (V_R - d.V0) / root_a};
}

double integral_I(double wF, double wR) {
    if (wF == wR) return 0.0;
    if (wF > kOverflowW) return kInf;
    const double gap = wF - wR;
    auto g = [wF, gap](double s) {
        return std::exp(-0.5 * s * s + s * wF) * (-std::expm1(-s * gap)) / s;
    };
    const double h = series_switch(wF, wR);
    return series_head(wF, wR, h) + gaussian_weighted_tail(g, wF, h);
}

double integral_I(double N_E, double N_I, const ModelParameters& p, Population pop) {
    const auto r = reduce(drive(p, pop, N_E, N_I), p.V_F, p.V_R);
    return integral_I(r.wF, r.wR);
}

double integral_I(double N, const OnePopParameters& p) {
    const auto r = reduce(drive(p, N), p.V_F, p.V_R);
    return integral_I(r.wF, r.wR);
}

double integral_J(double wF, double wR) {
    if (wF == wR) return 0.0;
    if (wF > kOverflowW) return kInf;
    const double gap = wF - wR;
    auto g = [wF, gap](double s) {
        return std::exp(-0.5 * s * s + s * wF) * (-std::expm1(-s * gap));
    };
    return gaussian_weighted_tail(g, wF, 0.0);
}

double integral_I_bruteforce(double wF, double wR) {
    if (wF == wR) return 0.0;
    if (wF > kOverflowW) return kInf;  // e^{wF^2/2} is past the double range
    const double z_lo = wF - 40.0;

    auto inner = [wF, wR](double z) {
        const double lo = std::max(z, wR);
        if (lo >= wF) return 0.0;
        auto f = [z](double u) { return std::exp(0.5 * (u * u - z * z)); };
        const double scale = std::max(f(lo), f(wF)) * (wF - lo);
        return integrate_simpson(f, lo, wF, 1e-13 * scale);
    };

    auto outer = [&](double a, double b) {
        if (b <= a) return 0.0;
        double peak = 0.0;
        for (int k = 0; k <= 64; ++k) peak = std::max(peak, inner(a + (b - a) * k / 64.0));
        if (peak == 0.0) return 0.0;
        return integrate_simpson(inner, a, b, 1e-12 * peak * (b - a), 16);
    };

    if (wR <= z_lo) return outer(z_lo, wF);
    return outer(z_lo, wR) + outer(wR, wF);
}

double integral_I_bruteforce(double N_E, double N_I, const ModelParameters& p,
                             Population pop) {
    const auto r = reduce(drive(p, pop, N_E, N_I), p.V_F, p.V_R);
    return integral_I_bruteforce(r.wF, r.wR);
}

namespace {

// Bisection for the increasing function f on [lo, hi] with f(lo) < 0 < f(hi).
double bisect(const std::function<double(double)>& f, double lo, double hi, double tol) {
    for (int it = 0; it < 200 && hi - lo > tol; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double value = f(mid);
        if (value > 0.0) {
            hi = mid;
        } else if (value < 0.0) {
            lo = mid;
        } else {
            return mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

double solve_inner_NI(double N_E, const ModelParameters& p, double tol) {
    const double tau_I = effective_tau(p.tau_I, p.refractory_mode);
    auto f = [&](double N_I) {
        return N_I * (tau_I + integral_I(N_E, N_I, p, Population::I)) - 1.0;
    };
    double hi = tau_I > 0.0 ? 1.0 / tau_I : 1.0;
    if (tau_I == 0.0) {
        while (f(hi) <= 0.0) {
            hi *= 2.0;
            if (hi > 1e8) throw NumericalError("solve_inner_NI: no bracket for N_I");
        }
    } else if (!(f(hi) > 0.0)) {
        throw NumericalError("solve_inner_NI: f(1/tau_I) <= 1, quadrature is inconsistent");
    }
    return bisect(f, 0.0, hi, tol);
}

double F_of_NE(double N_E, const ModelParameters& p) {
    if (N_E == 0.0) return 0.0;
    const double N_I = solve_inner_NI(N_E, p);
    const double tau_E = effective_tau(p.tau_E, p.refractory_mode);
    return N_E * (tau_E + integral_I(N_E, N_I, p, Population::E));
}

double F_of_N(double N, const OnePopParameters& p) {
    if (N == 0.0) return 0.0;
    return N * (effective_tau(p.tau, p.refractory_mode) + integral_I(N, p));
}

namespace {

struct RootScan {
    std::vector<double> roots;
    bool tangency = false;
    std::vector<double> ladder;
    std::vector<double> values;
};

RootScan scan_roots(const std::function<double(double)>& F, double upper, int points,
                    bool keep_curve) {
    if (points < 64) throw std::invalid_argument("find_steady_states: scan_points must be >= 64");
    RootScan scan;
    const double h = upper / (points - 1);
    std::vector<double> g(points);
    for (int k = 0; k < points; ++k) g[k] = F(k * h) - 1.0;
    if (!(g.front() < 0.0)) throw NumericalError("F(0) must vanish");

    auto G = [&](double x) { return F(x) - 1.0; };
    for (int k = 0; k + 1 < points; ++k) {
        const bool up = g[k] < 0.0 && g[k + 1] >= 0.0;
        const bool down = g[k] >= 0.0 && g[k + 1] < 0.0;
        if (!up && !down) continue;
        const double lo = k * h;
        const double hi = (k + 1) * h;
        const double tol = 1e-13 * std::max(1.0, hi);
        const double root = up ? bisect(G, lo, hi, tol)
                               : bisect([&](double x) { return -G(x); }, lo, hi, tol);
        scan.roots.push_back(root);
    }
    for (std::size_t i = 1; i < scan.roots.size(); ++i) {
        if (scan.roots[i] - scan.roots[i - 1] < 3.0 * h) scan.tangency = true;
    }
    if (keep_curve) {
        scan.ladder.resize(points);
        for (int k = 0; k < points; ++k) scan.ladder[k] = k * h;
        scan.values.assign(g.begin(), g.end());
        for (double& v : scan.values) v += 1.0;
    }
    return scan;
}

std::string tangency_message(const RootScan& scan) {
    std::ostringstream out;
    out << "tangency: " << scan.roots.size()
        << " roots with two closer than 3 ladder spacings; count may be unreliable";
    return out.str();
}

double scan_upper(double tau) { return tau > 0.0 ? 1.0 / tau : kUnboundedRateCap; }

}  // namespace

SteadyStates find_steady_states(const ModelParameters& p, int scan_points, const Grid& grid) {
    validate_parameters(p);
    const double tau_E = effective_tau(p.tau_E, p.refractory_mode);
    const double tau_I = effective_tau(p.tau_I, p.refractory_mode);
    const double upper = scan_upper(tau_E);
    if (tau_E > 0.0 && !(F_of_NE(upper, p) > 1.0)) {
        throw NumericalError("F(1/tau_E) must exceed 1");
    }
    const auto scan = scan_roots([&](double x) { return F_of_NE(x, p); }, upper, scan_points,
                                 false);
    SteadyStates out;
    out.tangency_warning = scan.tangency;
    if (scan.tangency) out.warnings.push_back(tangency_message(scan));
    for (double N_E : scan.roots) {
        SteadyStateSolution sol;
        sol.N_E = N_E;
        sol.N_I = solve_inner_NI(N_E, p);
        sol.R_E = tau_E * sol.N_E;
        sol.R_I = tau_I * sol.N_I;
        const double resE =
            1.0 - sol.N_E * (tau_E + integral_I(sol.N_E, sol.N_I, p, Population::E));
        const double resI =
            1.0 - sol.N_I * (tau_I + integral_I(sol.N_E, sol.N_I, p, Population::I));
        sol.residual = std::max(std::abs(resE), std::abs(resI));
        sol.profile_E = stationary_initial(grid, sol.N_E, sol.N_I, p, Population::E);
        sol.profile_I = stationary_initial(grid, sol.N_E, sol.N_I, p, Population::I);
        out.roots.push_back(std::move(sol));
    }
    return out;
}

SteadyStates find_steady_states(const ModelParameters& p, int scan_points) {
    return find_steady_states(p, scan_points, Grid(p.V_F, p.V_R));
}

SteadyStates find_steady_states(const OnePopParameters& p, int scan_points, const Grid& grid) {
    validate_parameters(p);
    const double tau = effective_tau(p.tau, p.refractory_mode);
    const auto scan =
        scan_roots([&](double x) { return F_of_N(x, p); }, scan_upper(tau), scan_points, false);
    SteadyStates out;
    out.tangency_warning = scan.tangency;
    if (scan.tangency) out.warnings.push_back(tangency_message(scan));
    if (scan.roots.empty()) out.warnings.push_back("no steady state in the scanned range");
    for (double N : scan.roots) {
        SteadyStateSolution sol;
        sol.one_population = true;
        sol.N_E = N;
        sol.R_E = tau * N;
        sol.residual = std::abs(1.0 - F_of_N(N, p));
        sol.profile_E = stationary_initial(grid, N, p);
        out.roots.push_back(std::move(sol));
    }
    return out;
}

SteadyStates find_steady_states(const OnePopParameters& p, int scan_points) {
    return find_steady_states(p, scan_points, Grid(p.V_F, p.V_R));
}

bool is_sweepable(const std::string& name) {
    return name == "b_EE" || name == "tau_E" || name == "b_IE" || name == "b_II" ||
           name == "b_EI" || name == "tau_I";
}

ModelParameters with_parameter(ModelParameters p, const std::string& name, double value) {
    if (name == "b_EE") p.b_EE = value;
    else if (name == "b_IE") p.b_IE = value;
    else if (name == "b_II") p.b_II = value;
    else if (name == "b_EI") p.b_EI = value;
    else if (name == "tau_E") p.tau_E = value;
    else if (name == "tau_I") p.tau_I = value;
    else throw std::invalid_argument("cannot sweep parameter '" + name + "'");
    return p;
}

BifurcationScan bifurcation_scan(const ModelParameters& p, const std::string& sweep,
                                 const std::vector<double>& values, int scan_points,
                                 bool keep_curves) {
    if (!is_sweepable(sweep)) throw std::invalid_argument("cannot sweep parameter '" + sweep + "'");
    BifurcationScan out;
    out.parameter = sweep;
    for (double value : values) {
        const auto q = validate_parameters(with_parameter(p, sweep, value));
        const double tau_E = effective_tau(q.tau_E, q.refractory_mode);
        const auto scan = scan_roots([&](double x) { return F_of_NE(x, q); },
                                     scan_upper(tau_E), scan_points, keep_curves);
        BifurcationPoint point;
        point.value = value;
        point.roots_NE = scan.roots;
        for (double N_E : scan.roots) point.roots_NI.push_back(solve_inner_NI(N_E, q));
        point.tangency_warning = scan.tangency;
        point.curve_NE = scan.ladder;
        point.curve_F = scan.values;
        out.points.push_back(std::move(point));
    }
    return out;
}

UniquenessBounds uniqueness_bounds(const ModelParameters& p) {
    validate_parameters(p);
    const double tau_E = effective_tau(p.tau_E, p.refractory_mode);
    if (tau_E == 0.0) throw std::invalid_argument("uniqueness_bounds needs a refractory period");
    const double N_top = 1.0 / tau_E;
    const double NI_0 = solve_inner_NI(0.0, p);
    const double NI_top = solve_inner_NI(N_top, p);

    const double root_aE = std::sqrt(p.d_E);
    const double root_aI = std::sqrt(p.d_I);
    auto aux = [&](double N_E, double N_I) {
        const double V0 = drive(p, Population::I, N_E, N_I).V0;
        return integral_J((p.V_F - V0) / root_aI, (p.V_R - V0) / root_aI);
    };
    const double J_0 = aux(0.0, NI_0);
    const double J_top = aux(N_top, NI_top);

    UniquenessBounds b;
    const double self = -p.b_EE / root_aE;
    const double cross = p.b_IE / root_aE;
    b.A = self + cross * (p.b_EI * NI_0 * NI_0 * J_top) /
                     (root_aI + p.b_II * NI_top * NI_top * J_0);
    b.B = self + cross * (p.b_EI * NI_top * NI_top * J_0) /
                     (root_aI + p.b_II * NI_0 * NI_0 * J_top);
    b.sufficient_unique = b.A >= 0.0;
    return b;
}

std::vector<double> default_mu_grid() {
    std::vector<double> mu(200);
    const double lo = std::log(0.01);
    const double hi = std::log(50.0);
    for (int k = 0; k < 200; ++k) mu[k] = std::exp(lo + (hi - lo) * k / 199.0);
    return mu;
}

BlowupCriterion blowup_criterion(const DensityField& rho0, const Grid& grid, double b_EE,
                                 const std::vector<double>& mu_grid) {
    if (!(b_EE > 0.0)) throw std::invalid_argument("blowup_criterion: b_EE must be > 0");
    BlowupCriterion best;
    std::vector<double> weighted(rho0.size());
    for (double mu : mu_grid) {
        if (!(mu > 0.0)) throw std::invalid_argument("blowup_criterion: mu must be > 0");
        for (std::size_t j = 0; j < rho0.size(); ++j) {
            weighted[j] = std::exp(mu * (grid.v(j) - grid.V_F())) * rho0[j];
        }
        const double margin = b_EE * mu * total_mass(weighted, grid);
        if (margin > best.margin || best.best_mu == 0.0) {
            best.margin = margin;
            best.best_mu = mu;
        }
    }
    best.satisfied = best.margin >= 1.0;
    return best;
}

}  // namespace nnlif
