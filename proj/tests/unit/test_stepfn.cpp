#include <doctest.h>

#include <cstdlib>
#include <random>
#include <sstream>

#include "munu/stepfn.hpp"

using namespace munu;

namespace {

const MobiusTable& shared_table() {
    static const MobiusTable t = mobius_sieve(100001);
    return t;
}

const StepEvaluator& shared_eval() {
    static const StepEvaluator ev(shared_table());
    return ev;
}

} // namespace

TEST_CASE("f_value hand examples") {
    const StepEvaluator& ev = shared_eval();
    // n=3, x=5: k=1 parity 5 -> +1; k=2 parity 2 -> 0; k=3 parity 1 -> -1.
    CHECK(ev.value(3, 5.0) == 0);
    CHECK(ev.value_naive(3, 5) == 0);
    // f_5 agrees with the full sum for x < 6
    CHECK(ev.value(5, 5.9) == -1);
    // nu(x/k) = 0 for all k when x < 1
    CHECK(ev.value(100, 0.7) == 0);
    CHECK(ev.value(1, 0.0) == 0);

    CHECK_THROWS_AS(ev.value(0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.value(shared_table().limit + 1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(ev.value(3, -1.0), std::invalid_argument);
}

TEST_CASE("blocked evaluation equals the naive sum") {
    const StepEvaluator& ev = shared_eval();
    for (std::uint64_t n : {std::uint64_t{1}, std::uint64_t{2}, std::uint64_t{17},
                            std::uint64_t{1000}})
        for (std::uint64_t m = 0; m <= 300; ++m)
            REQUIRE(ev.value_at(n, m) == ev.value_naive(n, m));

    std::mt19937_64 rng(11);
    for (int iter = 0; iter < 3000; ++iter) {
        const std::uint64_t n = 1 + rng() % 1000;
        const std::uint64_t m = rng() % 10001;
        REQUIRE(ev.value_at(n, m) == ev.value_naive(n, m));
    }
    // m far beyond the table limit only needs mu up to n
    CHECK(ev.value_at(10, 123456789012345ULL) ==
          ev.value_naive(10, 123456789012345ULL));
}

TEST_CASE("f_n(0) = 0 and f_n(1) = 1 for every n") {
    const StepEvaluator& ev = shared_eval();
    std::mt19937_64 rng(5);
    for (int iter = 0; iter < 200; ++iter) {
        const std::uint64_t n = 1 + rng() % 100000;
        REQUIRE(ev.value_at(n, 0) == 0);
        REQUIRE(ev.value_at(n, 1) == 1);
    }
}

TEST_CASE("truncation stability: f_n(m) = f_m(m) for m < n") {
    const StepEvaluator& ev = shared_eval();
    std::mt19937_64 rng(23);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::uint64_t n = 2 + rng() % 5000;
        const std::uint64_t m = 1 + rng() % (n - 1);
        REQUIRE(ev.value_at(n, m) == ev.value_at(m, m));
    }
}

TEST_CASE("piecewise constancy: f_n(x) = f_n(floor x)") {
    const StepEvaluator& ev = shared_eval();
    std::mt19937_64 rng(31);
    for (int iter = 0; iter < 2000; ++iter) {
        const std::uint64_t n = 1 + rng() % 2000;
        const double x =
            static_cast<double>(rng() % 20000) + static_cast<double>(rng() >> 11) * 0x1.0p-53;
        REQUIRE(ev.value(n, x) == ev.value_at(n, static_cast<std::uint64_t>(x)));
    }
}

TEST_CASE("profile windows") {
    const StepEvaluator& ev = shared_eval();

    const StepProfile p1 = ev.profile(1, 0, 4);
    CHECK(p1.values == std::vector<std::int64_t>{0, 1, 0, 1});

    const StepProfile p10 = ev.profile(10, 2, 11);
    for (std::int64_t v : p10.values) REQUIRE(v == -1);

    const StepProfile p3 = ev.profile(3, 5, 6);
    CHECK(p3.values == std::vector<std::int64_t>{0});
    CHECK(p3.at(5) == 0);
    CHECK_THROWS_AS(p3.at(6), std::out_of_range);

    CHECK_THROWS_AS(ev.profile(3, 5, 5), std::invalid_argument);
}

TEST_CASE("profile equals pointwise evaluation and is chunk/thread invariant") {
    const StepEvaluator& ev = shared_eval();
    // window crossing several 2^16 chunks
    const std::uint64_t lo = 65000, hi = 200000;
    const StepProfile p1 = ev.profile(317, lo, hi, 1);
    const StepProfile p4 = ev.profile(317, lo, hi, 4);
    REQUIRE(p1.values == p4.values);
    for (std::uint64_t m = lo; m < hi; m += 997)
        REQUIRE(p1.at(m) == ev.value_at(317, m));

    // entry magnitude never exceeds sum |mu(k)| <= n
    for (std::uint64_t i = 0; i < p1.values.size(); ++i)
        REQUIRE(std::llabs(p1.values[i]) <= 317);
}

TEST_CASE("f_limit takes only the values 0, 1, -1") {
    const StepEvaluator& ev = shared_eval();
    CHECK(ev.limit_value(0.3) == 0);
    CHECK(ev.limit_value(1.0) == 1);
    CHECK(ev.limit_value(1.99) == 1);
    CHECK(ev.limit_value(2.0) == -1);
    CHECK(ev.limit_value(100000.5) == -1);
    CHECK_THROWS_AS(ev.limit_value(1e18), std::invalid_argument);  // beyond table
}

TEST_CASE("sup_scan against an exhaustive brute force") {
    const StepEvaluator& ev = shared_eval();

    const SupScanResult s1 = ev.sup_scan(1, 10);
    CHECK(s1.sup_abs == 1);
    CHECK(s1.argmax_abs == 1);

    for (std::uint64_t n : {std::uint64_t{2}, std::uint64_t{10}, std::uint64_t{37}}) {
        const std::uint64_t x_max = 10 * n;
        const SupScanResult got = ev.sup_scan(n, x_max, 3);

        std::int64_t sup_abs = -1, sup_1p = -1, max_jump = -1;
        std::uint64_t arg_abs = 0, arg_1p = 0, arg_jump = 0;
        const std::uint64_t one_plus_from = std::max<std::uint64_t>(2, n);
        for (std::uint64_t m = 1; m < x_max; ++m) {
            const std::int64_t f = ev.value_naive(n, m);
            if (std::llabs(f) > sup_abs) {
                sup_abs = std::llabs(f);
                arg_abs = m;
            }
            if (m >= one_plus_from && std::llabs(1 + f) > sup_1p) {
                sup_1p = std::llabs(1 + f);
                arg_1p = m;
            }
            if (m >= 2) {
                const std::int64_t jump =
                    std::llabs(std::llabs(f) - std::llabs(ev.value_naive(n, m - 1)));
                if (jump > max_jump) {
                    max_jump = jump;
                    arg_jump = m;
                }
            }
        }
        REQUIRE(got.sup_abs == sup_abs);
        REQUIRE(got.argmax_abs == arg_abs);
        REQUIRE(got.sup_one_plus == sup_1p);
        REQUIRE(got.argmax_one_plus == arg_1p);
        REQUIRE(got.max_abs_jump == max_jump);
        REQUIRE(got.argmax_jump == arg_jump);
    }

    CHECK_THROWS_AS(ev.sup_scan(10, 10), std::invalid_argument);
}

TEST_CASE("sup_scan is thread invariant over chunked windows") {
    const StepEvaluator& ev = shared_eval();
    const SupScanResult a = ev.sup_scan(1000, 300000, 1);
    const SupScanResult b = ev.sup_scan(1000, 300000, 4);
    CHECK(a.sup_abs == b.sup_abs);
    CHECK(a.argmax_abs == b.argmax_abs);
    CHECK(a.sup_one_plus == b.sup_one_plus);
    CHECK(a.argmax_one_plus == b.argmax_one_plus);
    CHECK(a.max_abs_jump == b.max_abs_jump);
    CHECK(a.argmax_jump == b.argmax_jump);
}

TEST_CASE("1 + f_n vanishes on [2, n]") {
    const StepEvaluator& ev = shared_eval();
    for (std::uint64_t n : {std::uint64_t{10}, std::uint64_t{1000}}) {
        const StepProfile p = ev.profile(n, 2, n + 1);
        for (std::int64_t v : p.values) REQUIRE(1 + v == 0);
    }
}

TEST_CASE("profile CSV format") {
    const StepEvaluator& ev = shared_eval();
    const StepProfile p = ev.profile(1, 0, 3);
    std::ostringstream ss;
    write_profile_csv(p, ss);
    CHECK(ss.str() == "m,f_n_of_m\n0,0\n1,1\n2,0\n");
}
