#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace nnlif {

/// Raised when a numerical routine cannot deliver a trustworthy result.
class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct QuadratureResult {
    double value = 0.0;
    double error = 0.0;
};

/// Adaptive 15-point Gauss-Kronrod on [a, b]; endpoints are never evaluated.
/// Throws NumericalError if the error estimate misses max(abs_tol, rel_tol |I|)
/// by more than two orders of magnitude (subdivision limit reached).
template <class F>
QuadratureResult integrate_adaptive(F&& f, double a, double b, double abs_tol = 1e-10,
                                    double rel_tol = 1e-13, unsigned max_depth = 30) {
    if (a == b) return {};
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        f, a, b, max_depth, rel_tol, &error, &l1);
    const double budget = std::max(abs_tol, rel_tol * l1);
    if (!std::isfinite(value) && !std::isinf(value)) {
        throw NumericalError("quadrature produced NaN on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]");
    }
    if (std::isfinite(value) && error > 100.0 * budget) {
        throw NumericalError("quadrature did not converge on [" + std::to_string(a) + ", " +
                             std::to_string(b) + "]: error estimate " +
                             std::to_string(error));
    }
    return {value, error};
}

namespace detail {

template <class F>
double simpson_step(F& f, double a, double b, double fa, double fm, double fb, double whole,
                    double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0) {
        throw NumericalError("adaptive Simpson exceeded its subdivision limit near " +
                             std::to_string(m));
    }
    if (std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Recursive adaptive Simpson with Richardson correction. Evaluates endpoints.
/// `min_splits` uniform panels are used before adapting, which keeps narrow peaks
/// from being missed by the first coarse estimate.
template <class F>
double integrate_simpson(F&& f, double a, double b, double abs_tol, int min_splits = 8,
                         int max_depth = 48) {
    if (a == b) return 0.0;
    double total = 0.0;
    const double h = (b - a) / min_splits;
    for (int k = 0; k < min_splits; ++k) {
        const double lo = a + k * h;
        const double hi = (k + 1 == min_splits) ? b : lo + h;
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fm = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fm + fhi);
        total += detail::simpson_step(f, lo, hi, flo, fm, fhi, whole, abs_tol / min_splits,
                                      max_depth);
    }
    return total;
}

}  // namespace nnlif
