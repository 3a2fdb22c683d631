#pragma once

#include <complex>
#include <cstdint>

#include "munu/stepfn.hpp"

namespace munu {

using complex = std::complex<double>;

// Supported accuracy envelope for all complex-argument operations: sigma > 0
// and |t| <= 1000. Arguments outside it are rejected, not silently degraded.
inline constexpr double kMaxImag = 1.0e3;
inline constexpr double kMinEtaTol = 1.0e-14;
inline constexpr double kDefaultEtaTol = 1.0e-12;

enum class EtaMethod { accelerated_series, mellin_truncated };

struct EtaEval {
    complex value;
    double abs_error_bound = 0.0;  // finite and > 0
    EtaMethod method = EtaMethod::accelerated_series;
    std::uint64_t terms = 0;
};

// eta(s) = sum_k (2k-1)^{-s} - (2k)^{-s} via alternating-series acceleration
// with Chebyshev-derived weights; converges like (3+sqrt(8))^{-n} with an
// extra Gamma(sigma)/|Gamma(s)| factor for complex s. Throws accuracy_error
// if tol is unreachable within 2000 terms, carrying the achieved bound.
EtaEval eta_series(complex s, double tol = kDefaultEtaTol);

// The same quantity as s * integral_1^X nu(x) x^{-s-1} dx, integrated exactly
// piece by piece: nu is the indicator of the intervals [2k-1, 2k), so the
// truncated integral equals sum_{k<=X/2} (2k-1)^{-s} - (2k)^{-s}. X must be
// even. abs_error_bound = |s| / (sigma * X^sigma).
EtaEval eta_mellin_truncated(complex s, std::uint64_t X);

// sum_{k<=n} mu(k) k^{-s}, ascending k, compensated accumulation.
complex mobius_partial_dirichlet(const MobiusTable& table, std::uint64_t n, complex s);

// (1 - 2^{1-s}) / eta(s); the reference value partial Mobius sums are
// compared against. Throws near_zero_error when |eta(s)| <= 10*tol.
complex zeta_inverse_ref(complex s, double tol = kDefaultEtaTol);

struct StepIntegral {
    complex value;        // integral_2^X (1 + f_n(x)) x^{-s-1} dx, exact pieces
    double tail_bound;    // (1 + Q(n)) / (sigma * X^sigma)
};

// The integral is a sum over unit intervals [m, m+1):
//   sum_m (1 + f_n(m)) (m^{-s} - (m+1)^{-s}) / s.
StepIntegral truncated_step_integral(const StepEvaluator& ev, std::uint64_t n,
                                     complex s, std::uint64_t X,
                                     unsigned threads = 1);

struct ResidualRecord {
    std::uint64_t n = 0;
    complex s;
    double lhs = 0.0;             // |eta(s)/s * sum_{k<=n} mu(k)k^{-s} - (1-2^{1-s})/s|
    double rigorous_bound = 0.0;  // (1 + Q(n)) / (sigma * n^sigma)
    double windowed_bound = 0.0;  // sup-scan |1+f_n| over [max(2,n), x_max) / (sigma * n^sigma)
    std::uint64_t x_max = 0;
};

ResidualRecord dirichlet_residual(const StepEvaluator& ev, std::uint64_t n, complex s,
                                  std::uint64_t x_max, double eta_tol = kDefaultEtaTol,
                                  unsigned threads = 1);

struct ScaledMellinCheck {
    complex lhs;              // theta^s / s * (truncated eta sum), exact pieces
    complex rhs;              // theta^s * eta(s) / s
    double agreement_bound;   // theta^sigma-scaled tail + eta error
};

// integral_0^1 nu(theta/x) x^{s-1} dx = theta^s eta(s) / s for 0 < theta <= 1;
// the left side reduces under u = theta/x to theta^s/s times the truncated
// eta sum.
ScaledMellinCheck scaled_mellin_check(double theta, complex s, std::uint64_t X,
                                      double eta_tol = kDefaultEtaTol);

// log Gamma(z) for Re(z) > 0 (Lanczos); used for error-bound prefactors.
complex log_gamma(complex z);

namespace detail {

// k^{-s} = exp(-sigma ln k) * (cos(t ln k) - i sin(t ln k)). Written out so
// that conj(s) maps to conj(result) bit-exactly.
inline complex pow_int_neg(std::uint64_t k, complex s) {
    const double L = std::log(static_cast<double>(k));
    const double r = std::exp(-s.real() * L);
    const double a = s.imag() * L;
    return {r * std::cos(a), -r * std::sin(a)};
}

// b^w for real b > 0.
inline complex pow_real(double b, complex w) {
    const double L = std::log(b);
    const double r = std::exp(w.real() * L);
    const double a = w.imag() * L;
    return {r * std::cos(a), r * std::sin(a)};
}

inline complex two_pow_one_minus_s(complex s) {
    return pow_real(2.0, complex{1.0, 0.0} - s);
}

} // namespace detail

} // namespace munu
