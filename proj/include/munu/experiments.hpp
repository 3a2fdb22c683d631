#pragma once

#include <cstdint>
#include <vector>

#include "munu/analytic.hpp"
#include "munu/report.hpp"
#include "munu/stepfn.hpp"

namespace munu {

// Cartesian grid of s = sigma + i t, sigma-major then t, in the given order.
std::vector<complex> make_s_grid(const std::vector<double>& sigmas,
                                 const std::vector<double>& ts);

// Checks that f_{floor(x)}(x) equals 0 on [0,1), 1 on [1,2) and -1 on
// [2, m_max], exactly, for every integer m <= m_max and for `samples` seeded
// uniform real x in [0, m_max).
StudyReport verify_limit_values(const StepEvaluator& ev, std::uint64_t m_max,
                                std::uint64_t samples, std::uint64_t seed);

// Dual-path identity check: for each (n, s) the exact truncated integral of
// (1 + f_n(x)) x^{-s-1} over [2, X] must match
// eta(s)/s * sum_{k<=n} mu(k)k^{-s} - (1-2^{1-s})/s within the integral's
// tail bound plus 1e-10 * (1 + Q(n)) rounding allowance.
StudyReport verify_integral_identity(const StepEvaluator& ev,
                                     const std::vector<std::uint64_t>& n_set,
                                     const std::vector<complex>& s_grid,
                                     std::uint64_t X,
                                     double eta_tol = kDefaultEtaTol);

// Residual records over (n, s); asserts lhs <= rigorous_bound per point.
// x_max per record is ceil(window_factor * n).
StudyReport residual_suite(const StepEvaluator& ev,
                           const std::vector<std::uint64_t>& n_set,
                           const std::vector<complex>& s_grid,
                           double window_factor,
                           double eta_tol = kDefaultEtaTol,
                           unsigned threads = 1);

// |partial Mobius Dirichlet sum - (1-2^{1-s})/eta(s)| along an ascending n
// grid; asserts only that the last residual is below the first (trend, not a
// limit). If eta(s) is too close to zero the reference is unavailable and the
// study records partial sums only.
StudyReport convergence_study(const MobiusTable& table, complex s,
                              const std::vector<std::uint64_t>& n_grid,
                              double eta_tol = kDefaultEtaTol);

struct GrowthFit {
    std::vector<std::pair<std::uint64_t, std::int64_t>> points;  // (n, sup|f_n| in window)
    double exponent = 0.0;   // slope of ln sup vs ln n
    double intercept = 0.0;
    double r_squared = 0.0;
    double window_factor = 0.0;
    bool has_fit = false;    // needs >= 3 points
};

// Ordinary least squares on (ln n, ln F). Throws std::invalid_argument with
// fewer than 3 points.
GrowthFit fit_loglog(const std::vector<std::pair<std::uint64_t, std::int64_t>>& points,
                     double window_factor);

struct GrowthStudy {
    GrowthFit fit;
    StudyReport report;
};

// F(n) = windowed sup |f_n| over [1, ceil(window_factor*n)); log-log exponent
// fit plus normalized proxies F(n)/n^{sigma'} for sigma' in {0.51, 0.6, 0.75}
// and a window-sensitivity column (window_factor vs 10*window_factor on the
// subsample where that stays affordable).
GrowthStudy growth_study(const StepEvaluator& ev,
                         const std::vector<std::uint64_t>& n_grid,
                         double window_factor, unsigned threads = 1);

// Coefficient-bound sweep. For every n up to max(n_grid) and each sigma,
// asserts sum_{k<=n} |mu(k)|/k^sigma <= n^{1-sigma}/(1-sigma) - 1/(1-sigma) + 1
// (log n + 1 at sigma = 1) with 1e-12 slack; at grid points also computes the
// exact truncated integral of |f_n(x)| x^{-sigma-1} over [1, X] and asserts it
// stays below eta(sigma)/sigma * sum_{k<=n} |mu(k)| k^{-sigma} plus the tail
// allowance, recording the n^{1-sigma} normalization.
StudyReport bound_sweep(const StepEvaluator& ev,
                        const std::vector<std::uint64_t>& n_grid,
                        const std::vector<double>& sigma_set,
                        std::uint64_t X,
                        unsigned threads = 1);

} // namespace munu
