#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "munu/arith.hpp"

namespace munu {

// f_n sampled on an integer window [m_lo, m_hi). f_n is constant on every
// [m, m+1), so integer samples determine the function.
struct StepProfile {
    std::uint64_t n = 0;
    std::uint64_t m_lo = 0;
    std::uint64_t m_hi = 0;
    std::vector<std::int64_t> values;  // values[i] = f_n(m_lo + i)

    std::int64_t at(std::uint64_t m) const;
};

// Windowed maxima of |f_n| and |1 + f_n|. Both are lower bounds of the true
// suprema over [1, inf); argmax is the smallest m attaining the max.
struct SupScanResult {
    std::uint64_t n = 0;
    std::uint64_t x_max = 0;
    std::int64_t sup_abs = 0;            // max |f_n(m)|, m in [1, x_max)
    std::uint64_t argmax_abs = 0;
    std::int64_t sup_one_plus = 0;       // max |1 + f_n(m)|, m in [max(2,n), x_max)
    std::uint64_t argmax_one_plus = 0;
    std::int64_t max_abs_jump = 0;       // max | |f_n(m)| - |f_n(m-1)| |, m in [2, x_max)
    std::uint64_t argmax_jump = 0;
};

// Evaluates f_n(x) = sum_{k<=n} mu(k) nu(x/k) exactly over a fixed MobiusTable.
// Holds the Mertens prefix sums so a single evaluation at floor(x) = m costs
// O(min(n, sqrt(m))) via blocks of constant floor(m/k).
//
// The table is borrowed, not owned; it must outlive the evaluator.
class StepEvaluator {
public:
    explicit StepEvaluator(const MobiusTable& table);

    const MobiusTable& table() const { return *table_; }
    std::uint64_t limit() const { return table_->limit; }
    std::int64_t mertens_prefix(std::uint64_t k) const { return mertens_[k]; }

    // f_n(m) for integer m, blocked evaluation.
    std::int64_t value_at(std::uint64_t n, std::uint64_t m) const;
    // Direct O(n) sum; independent oracle for value_at.
    std::int64_t value_naive(std::uint64_t n, std::uint64_t m) const;
    // f_n(x) = f_n(floor(x)).
    std::int64_t value(std::uint64_t n, double x) const;
    // f_{floor(x)}(x), which equals the full sum over all k since nu(x/k) = 0
    // for k > x. Takes values 0 on [0,1), 1 on [1,2), -1 on [2, inf).
    std::int64_t limit_value(double x) const;

    // f_n(m) for every integer m in [m_lo, m_hi). Window chunks may run in
    // parallel; the result is identical for any thread count.
    StepProfile profile(std::uint64_t n, std::uint64_t m_lo, std::uint64_t m_hi,
                        unsigned threads = 1) const;

    SupScanResult sup_scan(std::uint64_t n, std::uint64_t x_max,
                           unsigned threads = 1) const;

private:
    void fill_chunk(std::uint64_t n, std::uint64_t clo, std::uint64_t chi,
                    std::int64_t* out) const;

    const MobiusTable* table_;
    std::vector<std::int64_t> mertens_;
};

// CSV with header "m,f_n_of_m", one row per integer m.
void write_profile_csv(const StepProfile& profile, std::ostream& os);

} // namespace munu
