#include "munu/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "munu/errors.hpp"
#include "munu/summation.hpp"

namespace munu {

namespace {

constexpr int kMaxEtaTerms = 2000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Nonnegative value held as m * 2^e so products of ~(3+sqrt(8))^n magnitude
// stay representable; frexp/ldexp scaling is exact.
struct scaled_pos {
    double m = 0.0;
    int e = 0;
};

scaled_pos normalize(double m, int e) {
    if (m == 0.0) return {};
    int de = 0;
    m = std::frexp(m, &de);
    return {m, e + de};
}

scaled_pos scaled_add(scaled_pos a, scaled_pos b) {
    if (a.m == 0.0) return b;
    if (b.m == 0.0) return a;
    if (a.e < b.e) std::swap(a, b);
    const int d = b.e - a.e;
    if (d < -200) return a;
    return normalize(a.m + std::ldexp(b.m, d), a.e);
}

double scaled_ratio(scaled_pos num, scaled_pos den) {
    if (num.m == 0.0) return 0.0;
    const int d = num.e - den.e;
    if (d < -1000) return 0.0;
    return std::ldexp(num.m / den.m, d);
}

void require_envelope(complex s, const char* who) {
    if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw std::invalid_argument(std::string(who) + ": s must be finite");
    if (s.real() <= 0.0)
        throw std::domain_error(std::string(who) + ": requires Re(s) > 0");
    if (std::abs(s.imag()) > kMaxImag)
        throw std::invalid_argument(std::string(who) +
                                    ": |Im(s)| exceeds the supported envelope of 1000");
}

double pow_u64(std::uint64_t b, double e) {
    return std::pow(static_cast<double>(b), e);
}

} // namespace

complex log_gamma(complex z) {
    if (!(z.real() > 0.0))
        throw std::domain_error("log_gamma: requires Re(z) > 0");
    // Lanczos, g = 7, 9 coefficients; ~1e-13 relative over the right half plane.
    static const double c[9] = {
        0.99999999999980993,   676.5203681218851,     -1259.1392167224028,
        771.32342877765313,    -176.61502916214059,   12.507343278686905,
        -0.13857109526572012,  9.9843695780195716e-6, 1.5056327351493116e-7};
    const complex zz = z - 1.0;
    complex x = c[0];
    for (int i = 1; i < 9; ++i) x += c[i] / (zz + static_cast<double>(i));
    const complex t = zz + 7.5;
    return 0.5 * std::log(2.0 * std::numbers::pi) + (zz + 0.5) * std::log(t) - t +
           std::log(x);
}

EtaEval eta_series(complex s, double tol) {
    require_envelope(s, "eta_series");
    if (!std::isfinite(tol) || tol < kMinEtaTol)
        throw std::invalid_argument("eta_series: tol must be >= 1e-14");

    const double sigma = s.real();
    // Truncation error of the Chebyshev-weighted sum is bounded by
    // 2 * Gamma(sigma)/|Gamma(s)| * (3+sqrt(8))^{-n}; 12.5% slack covers the
    // Lanczos evaluation of the prefactor.
    const double ln_rho = std::log(3.0 + std::sqrt(8.0));
    const double lnC = std::log(2.25) + std::lgamma(sigma) - log_gamma(s).real();
    int n = static_cast<int>(std::ceil((lnC + std::log(2.0 / tol)) / ln_rho)) + 2;
    n = std::clamp(n, 8, kMaxEtaTerms);

    // Weights w_k = (d_n - d_k)/d_n from the positive increments
    // e_k = d_k - d_{k-1}; consecutive ratios are exact small rationals, so the
    // increments accumulate in scaled form with ~k*eps relative error even
    // though their magnitudes reach (3+sqrt(8))^n.
    std::vector<scaled_pos> inc(static_cast<std::size_t>(n) + 1);
    inc[0] = normalize(1.0, 0);
    for (int k = 0; k < n; ++k) {
        const double num =
            4.0 * (static_cast<double>(n) + k) * (static_cast<double>(n) - k);
        const double den = (2.0 * k + 1.0) * (2.0 * k + 2.0);
        inc[static_cast<std::size_t>(k) + 1] =
            normalize(inc[static_cast<std::size_t>(k)].m * (num / den),
                      inc[static_cast<std::size_t>(k)].e);
    }
    // tails summed small-to-large
    std::vector<scaled_pos> tail(static_cast<std::size_t>(n) + 1);
    tail[static_cast<std::size_t>(n)] = {};
    for (int k = n - 1; k >= 0; --k)
        tail[static_cast<std::size_t>(k)] =
            scaled_add(tail[static_cast<std::size_t>(k) + 1],
                       inc[static_cast<std::size_t>(k) + 1]);
    const scaled_pos total = scaled_add(tail[0], inc[0]);
    std::vector<double> weight(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k)
        weight[static_cast<std::size_t>(k)] =
            scaled_ratio(tail[static_cast<std::size_t>(k)], total);

    cneumaier_sum acc;
    neumaier_sum abs_acc;
    for (int k = 0; k < n; ++k) {
        const double L = std::log(static_cast<double>(k) + 1.0);
        const double r = std::exp(-sigma * L) * weight[static_cast<std::size_t>(k)];
        const double a = s.imag() * L;
        complex term{r * std::cos(a), -r * std::sin(a)};
        if (k & 1) term = -term;
        acc.add(term);
        abs_acc.add(r);
    }

    const double trunc = std::exp(lnC - n * ln_rho);
    // First-order rounding term: ~3 ulp per term plus the compensated-sum and
    // weight-accumulation contributions, the latter growing like sqrt(n).
    const double rounding =
        kEps * abs_acc.value() * (8.0 + std::sqrt(static_cast<double>(n))) + 2.0 * kEps;
    EtaEval out;
    out.value = acc.value();
    out.abs_error_bound = trunc + rounding;
    out.method = EtaMethod::accelerated_series;
    out.terms = static_cast<std::uint64_t>(n);
    if (out.abs_error_bound > tol)
        throw accuracy_error("eta_series: cannot reach tol=" + std::to_string(tol) +
                                 " within " + std::to_string(kMaxEtaTerms) +
                                 " terms; achieved " + std::to_string(out.abs_error_bound),
                             out.abs_error_bound);
    return out;
}

EtaEval eta_mellin_truncated(complex s, std::uint64_t X) {
    require_envelope(s, "eta_mellin_truncated");
    if (X < 2 || (X & 1))
        throw std::invalid_argument("eta_mellin_truncated: X must be even and >= 2");

    // nu is the indicator of [2k-1, 2k), so s * integral_1^X nu(x) x^{-s-1} dx
    // collapses to paired closed-form pieces.
    cneumaier_sum acc;
    const std::uint64_t pairs = X / 2;
    for (std::uint64_t k = 1; k <= pairs; ++k)
        acc.add(detail::pow_int_neg(2 * k - 1, s) - detail::pow_int_neg(2 * k, s));

    EtaEval out;
    out.value = acc.value();
    out.abs_error_bound = std::abs(s) / (s.real() * pow_u64(X, s.real()));
    out.method = EtaMethod::mellin_truncated;
    out.terms = pairs;
    return out;
}

complex mobius_partial_dirichlet(const MobiusTable& table, std::uint64_t n, complex s) {
    require_envelope(s, "mobius_partial_dirichlet");
    if (n == 0 || n > table.limit)
        throw std::invalid_argument("mobius_partial_dirichlet: n out of table range");
    cneumaier_sum acc;
    for (std::uint64_t k = 1; k <= n; ++k) {
        const int mk = table.values[k];
        if (mk == 0) continue;
        const complex p = detail::pow_int_neg(k, s);
        acc.add(mk > 0 ? p : -p);
    }
    return acc.value();
}

complex zeta_inverse_ref(complex s, double tol) {
    const EtaEval eta = eta_series(s, tol);
    if (std::abs(eta.value) <= 10.0 * tol)
        throw near_zero_error("zeta_inverse_ref: |eta(s)| <= 10*tol, too close to a zero");
    return (complex{1.0, 0.0} - detail::two_pow_one_minus_s(s)) / eta.value;
}

StepIntegral truncated_step_integral(const StepEvaluator& ev, std::uint64_t n,
                                     complex s, std::uint64_t X, unsigned threads) {
    require_envelope(s, "truncated_step_integral");
    if (n == 0 || n > ev.limit())
        throw std::invalid_argument("truncated_step_integral: n out of table range");
    if (X <= n)
        throw std::invalid_argument("truncated_step_integral: X must exceed n");

    cneumaier_sum acc;
    if (X > 2) {
        const StepProfile prof = ev.profile(n, 2, X, threads);
        complex next_pow;       // (m+1)^{-s} carried to the next iteration
        std::uint64_t have_for = 0;  // m+1 value next_pow corresponds to, 0 = none
        for (std::uint64_t m = 2; m < X; ++m) {
            const std::int64_t c = 1 + prof.values[m - 2];
            if (c == 0) continue;
            const complex pm = (have_for == m) ? next_pow : detail::pow_int_neg(m, s);
            next_pow = detail::pow_int_neg(m + 1, s);
            have_for = m + 1;
            acc.add(static_cast<double>(c) * (pm - next_pow));
        }
    }
    StepIntegral out;
    out.value = acc.value() / s;
    const double q = static_cast<double>(squarefree_count(ev.table(), n));
    out.tail_bound = (1.0 + q) / (s.real() * pow_u64(X, s.real()));
    return out;
}

ResidualRecord dirichlet_residual(const StepEvaluator& ev, std::uint64_t n, complex s,
                                  std::uint64_t x_max, double eta_tol, unsigned threads) {
    require_envelope(s, "dirichlet_residual");
    if (n == 0 || n > ev.limit())
        throw std::invalid_argument("dirichlet_residual: n out of table range");
    if (x_max <= n)
        throw std::invalid_argument("dirichlet_residual: x_max must exceed n");

    const EtaEval eta = eta_series(s, eta_tol);
    const complex partial = mobius_partial_dirichlet(ev.table(), n, s);
    const complex rhs_const = (complex{1.0, 0.0} - detail::two_pow_one_minus_s(s)) / s;

    ResidualRecord rec;
    rec.n = n;
    rec.s = s;
    rec.lhs = std::abs(eta.value / s * partial - rhs_const);
    const double q = static_cast<double>(squarefree_count(ev.table(), n));
    const double denom = s.real() * pow_u64(n, s.real());
    rec.rigorous_bound = (1.0 + q) / denom;
    const SupScanResult scan = ev.sup_scan(n, x_max, threads);
    rec.windowed_bound = static_cast<double>(scan.sup_one_plus) / denom;
    rec.x_max = x_max;
    return rec;
}

ScaledMellinCheck scaled_mellin_check(double theta, complex s, std::uint64_t X,
                                      double eta_tol) {
    if (!std::isfinite(theta) || theta <= 0.0 || theta > 1.0)
        throw std::invalid_argument("scaled_mellin_check: theta must lie in (0, 1]");
    const EtaEval trunc = eta_mellin_truncated(s, X);
    const EtaEval eta = eta_series(s, eta_tol);
    const complex theta_s = detail::pow_real(theta, s);

    ScaledMellinCheck out;
    out.lhs = theta_s * trunc.value / s;
    out.rhs = theta_s * eta.value / s;
    const double theta_sigma = std::pow(theta, s.real());
    out.agreement_bound = theta_sigma / (s.real() * pow_u64(X, s.real())) +
                          theta_sigma * eta.abs_error_bound / std::abs(s);
    return out;
}

} // namespace munu
