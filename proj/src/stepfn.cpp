#include "munu/stepfn.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "munu/parallel.hpp"

namespace munu {

namespace {

constexpr std::uint64_t kScanChunk = std::uint64_t{1} << 16;

// f_n jumps only where some k <= n divides m, so doubles up to 2^63 are a
// safe integer window; beyond that floor(x) no longer fits the scan types.
std::uint64_t floor_to_u64(double x, const char* who) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument(std::string(who) + ": x must be finite and >= 0");
    if (x >= 9.223372036854775808e18)
        throw std::invalid_argument(std::string(who) + ": x exceeds the 2^63 envelope");
    return static_cast<std::uint64_t>(x);
}

struct ChunkStats {
    std::int64_t sup_abs = -1;
    std::uint64_t argmax_abs = 0;
    std::int64_t sup_one_plus = -1;
    std::uint64_t argmax_one_plus = 0;
    std::int64_t max_jump = -1;
    std::uint64_t argmax_jump = 0;
};

} // namespace

std::int64_t StepProfile::at(std::uint64_t m) const {
    if (m < m_lo || m >= m_hi) throw std::out_of_range("StepProfile::at: m outside window");
    return values[m - m_lo];
}

StepEvaluator::StepEvaluator(const MobiusTable& table) : table_(&table) {
    mertens_.resize(table.limit + 1);
    mertens_[0] = 0;
    for (std::uint64_t k = 1; k <= table.limit; ++k)
        mertens_[k] = mertens_[k - 1] + table.values[k];
}

std::int64_t StepEvaluator::value_at(std::uint64_t n, std::uint64_t m) const {
    if (n == 0 || n > limit())
        throw std::invalid_argument("StepEvaluator: n out of table range");
    if (m == 0) return 0;
    // Blocks of constant q = floor(m/k); each contributes parity(q) times a
    // Mertens increment. O(min(n, 2*sqrt(m))) iterations.
    const std::uint64_t K = std::min(n, m);
    std::int64_t acc = 0;
    std::uint64_t k = 1;
    while (k <= K) {
        const std::uint64_t q = m / k;
        const std::uint64_t k_hi = std::min(K, m / q);
        if (q & 1) acc += mertens_[k_hi] - mertens_[k - 1];
        k = k_hi + 1;
    }
    return acc;
}

std::int64_t StepEvaluator::value_naive(std::uint64_t n, std::uint64_t m) const {
    if (n == 0 || n > limit())
        throw std::invalid_argument("StepEvaluator: n out of table range");
    const std::uint64_t K = std::min(n, m);
    std::int64_t acc = 0;
    for (std::uint64_t k = 1; k <= K; ++k)
        if (((m / k) & 1) && table_->values[k] != 0) acc += table_->values[k];
    return acc;
}

std::int64_t StepEvaluator::value(std::uint64_t n, double x) const {
    return value_at(n, floor_to_u64(x, "StepEvaluator::value"));
}

std::int64_t StepEvaluator::limit_value(double x) const {
    const std::uint64_t m = floor_to_u64(x, "StepEvaluator::limit_value");
    if (m == 0) return 0;
    if (m > limit())
        throw std::invalid_argument("StepEvaluator::limit_value: floor(x) exceeds table limit");
    return value_at(m, m);
}

void StepEvaluator::fill_chunk(std::uint64_t n, std::uint64_t clo, std::uint64_t chi,
                               std::int64_t* out) const {
    const std::uint64_t len = chi - clo;
    // delta[i] = f_n(clo+i) - f_n(clo+i-1): parity of floor(m/k) flips exactly
    // when k divides m, with sign +mu(k) when the new quotient is odd.
    std::vector<std::int32_t> delta(len, 0);
    const std::uint64_t kmax = std::min(n, chi - 1);
    for (std::uint64_t k = 1; k <= kmax; ++k) {
        const int mk = table_->values[k];
        if (mk == 0) continue;
        for (std::uint64_t m = (clo / k + 1) * k; m < chi; m += k) {
            const std::uint64_t q = m / k;
            delta[m - clo] += (q & 1) ? mk : -mk;
        }
    }
    std::int64_t f = value_at(n, clo);
    out[0] = f;
    for (std::uint64_t i = 1; i < len; ++i) {
        f += delta[i];
        out[i] = f;
    }
}

StepProfile StepEvaluator::profile(std::uint64_t n, std::uint64_t m_lo, std::uint64_t m_hi,
                                   unsigned threads) const {
    if (m_lo >= m_hi) throw std::invalid_argument("StepEvaluator::profile: empty window");
    if (m_hi > (std::uint64_t{1} << 63))
        throw std::invalid_argument("StepEvaluator::profile: window exceeds the 2^63 envelope");
    if (n == 0 || n > limit())
        throw std::invalid_argument("StepEvaluator::profile: n out of table range");
    StepProfile p;
    p.n = n;
    p.m_lo = m_lo;
    p.m_hi = m_hi;
    p.values.resize(m_hi - m_lo);
    parallel_chunks(m_lo, m_hi, kScanChunk, threads,
                    [&](std::size_t, std::uint64_t clo, std::uint64_t chi) {
        fill_chunk(n, clo, chi, p.values.data() + (clo - m_lo));
    });
    return p;
}

SupScanResult StepEvaluator::sup_scan(std::uint64_t n, std::uint64_t x_max,
                                      unsigned threads) const {
    if (n == 0 || n > limit())
        throw std::invalid_argument("StepEvaluator::sup_scan: n out of table range");
    if (x_max <= n)
        throw std::invalid_argument("StepEvaluator::sup_scan: x_max must exceed n");
    if (x_max > (std::uint64_t{1} << 63))
        throw std::invalid_argument("StepEvaluator::sup_scan: x_max exceeds the 2^63 envelope");

    const std::uint64_t lo = 1, hi = x_max;
    const std::uint64_t one_plus_from = std::max<std::uint64_t>(2, n);
    const std::uint64_t nchunks = (hi - lo + kScanChunk - 1) / kScanChunk;
    std::vector<ChunkStats> stats(nchunks);

    parallel_chunks(lo, hi, kScanChunk, threads,
                    [&](std::size_t c, std::uint64_t clo, std::uint64_t chi) {
        std::vector<std::int64_t> buf(chi - clo);
        fill_chunk(n, clo, chi, buf.data());
        ChunkStats st;
        std::int64_t prev_abs =
            (clo >= 2) ? std::abs(value_at(n, clo - 1)) : -1;
        for (std::uint64_t m = clo; m < chi; ++m) {
            const std::int64_t f = buf[m - clo];
            const std::int64_t af = std::abs(f);
            if (af > st.sup_abs) {
                st.sup_abs = af;
                st.argmax_abs = m;
            }
            if (m >= one_plus_from) {
                const std::int64_t ap = std::abs(1 + f);
                if (ap > st.sup_one_plus) {
                    st.sup_one_plus = ap;
                    st.argmax_one_plus = m;
                }
            }
            if (prev_abs >= 0) {
                const std::int64_t jump = std::abs(af - prev_abs);
                if (jump > st.max_jump) {
                    st.max_jump = jump;
                    st.argmax_jump = m;
                }
            }
            prev_abs = af;
        }
        stats[c] = st;
    });

    // Ascending merge with strict > keeps the smallest argmax.
    SupScanResult r;
    r.n = n;
    r.x_max = x_max;
    r.sup_abs = 0;
    r.sup_one_plus = 0;
    r.max_abs_jump = 0;
    bool any_abs = false, any_one_plus = false, any_jump = false;
    for (const ChunkStats& st : stats) {
        if (st.sup_abs >= 0 && (!any_abs || st.sup_abs > r.sup_abs)) {
            r.sup_abs = st.sup_abs;
            r.argmax_abs = st.argmax_abs;
            any_abs = true;
        }
        if (st.sup_one_plus >= 0 && (!any_one_plus || st.sup_one_plus > r.sup_one_plus)) {
            r.sup_one_plus = st.sup_one_plus;
            r.argmax_one_plus = st.argmax_one_plus;
            any_one_plus = true;
        }
        if (st.max_jump >= 0 && (!any_jump || st.max_jump > r.max_abs_jump)) {
            r.max_abs_jump = st.max_jump;
            r.argmax_jump = st.argmax_jump;
            any_jump = true;
        }
    }
    return r;
}

void write_profile_csv(const StepProfile& profile, std::ostream& os) {
    os << "m,f_n_of_m\n";
    for (std::uint64_t i = 0; i < profile.values.size(); ++i)
        os << (profile.m_lo + i) << ',' << profile.values[i] << '\n';
}

} // namespace munu
