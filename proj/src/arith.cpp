#include "munu/arith.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "munu/errors.hpp"
#include "munu/parallel.hpp"
#include "munu/summation.hpp"

namespace munu {

namespace {

constexpr char kCacheMagic[8] = {'M', 'U', 'N', 'V', '0', '0', '0', '1'};

std::uint64_t isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

std::vector<std::uint32_t> primes_up_to(std::uint64_t limit) {
    std::vector<std::uint32_t> primes;
    if (limit < 2) return primes;
    std::vector<char> is_prime(limit + 1, 1);
    is_prime[0] = is_prime[1] = 0;
    for (std::uint64_t i = 2; i * i <= limit; ++i)
        if (is_prime[i])
            for (std::uint64_t j = i * i; j <= limit; j += i) is_prime[j] = 0;
    for (std::uint64_t i = 2; i <= limit; ++i)
        if (is_prime[i]) primes.push_back(static_cast<std::uint32_t>(i));
    return primes;
}

} // namespace

int MobiusTable::mu(std::uint64_t k) const {
    if (k == 0 || k > limit) throw std::out_of_range("MobiusTable::mu: k out of range");
    return values[k];
}

MobiusTable mobius_sieve_linear(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("mobius_sieve: N must be >= 1");
    MobiusTable t;
    t.limit = n;
    t.values.assign(n + 1, 0);
    t.values[1] = 1;

    // Linear sieve over smallest prime factors: every composite is crossed
    // off exactly once, as p * i with p = lpf(p * i).
    std::vector<std::uint32_t> lpf(n + 1, 0);
    std::vector<std::uint32_t> primes;
    for (std::uint64_t i = 2; i <= n; ++i) {
        if (lpf[i] == 0) {
            lpf[i] = static_cast<std::uint32_t>(i);
            primes.push_back(static_cast<std::uint32_t>(i));
            t.values[i] = -1;
        }
        for (std::uint32_t p : primes) {
            if (p > lpf[i]) break;
            const std::uint64_t m = static_cast<std::uint64_t>(p) * i;
            if (m > n) break;
            lpf[m] = p;
            t.values[m] = (p == lpf[i]) ? std::int8_t{0}
                                        : static_cast<std::int8_t>(-t.values[i]);
        }
    }
    return t;
}

MobiusTable mobius_sieve_segmented(std::uint64_t n, std::uint64_t segment_size,
                                   unsigned threads) {
    if (n == 0) throw std::invalid_argument("mobius_sieve: N must be >= 1");
    if (segment_size == 0) throw std::invalid_argument("mobius_sieve: segment size must be >= 1");

    const auto base_primes = primes_up_to(isqrt_u64(n));
    MobiusTable t;
    t.limit = n;
    t.values.assign(n + 1, 0);

    // Each segment [lo, hi] gets a sign flip and one division of the stored
    // cofactor per distinct small prime; multiples of p^2 are zeroed. A
    // cofactor > 1 at the end is a single prime above sqrt(n), one more flip.
    parallel_chunks(1, n + 1, segment_size, threads,
                    [&](std::size_t, std::uint64_t lo, std::uint64_t hi_excl) {
        const std::uint64_t len = hi_excl - lo;
        std::vector<std::uint64_t> rem(len);
        std::vector<std::int8_t> sgn(len, 1);
        std::vector<std::uint8_t> zeroed(len, 0);
        for (std::uint64_t j = 0; j < len; ++j) rem[j] = lo + j;

        for (const std::uint32_t p : base_primes) {
            const std::uint64_t p64 = p;
            std::uint64_t first = ((lo + p64 - 1) / p64) * p64;
            for (std::uint64_t m = first; m < hi_excl; m += p64) {
                const std::uint64_t j = m - lo;
                sgn[j] = static_cast<std::int8_t>(-sgn[j]);
                rem[j] /= p64;
            }
            const std::uint64_t p2 = p64 * p64;
            if (p2 >= hi_excl) continue;
            first = ((lo + p2 - 1) / p2) * p2;
            for (std::uint64_t m = first; m < hi_excl; m += p2) zeroed[m - lo] = 1;
        }

        for (std::uint64_t j = 0; j < len; ++j) {
            if (zeroed[j])
                t.values[lo + j] = 0;
            else if (rem[j] > 1)
                t.values[lo + j] = static_cast<std::int8_t>(-sgn[j]);
            else
                t.values[lo + j] = sgn[j];
        }
    });
    return t;
}

MobiusTable mobius_sieve(std::uint64_t n, const SieveOptions& opt) {
    if (n == 0) throw std::invalid_argument("mobius_sieve: N must be >= 1");
    if (n + 1 > opt.max_table_bytes)
        throw resource_error("mobius_sieve: table of " + std::to_string(n) +
                             " entries exceeds the memory budget of " +
                             std::to_string(opt.max_table_bytes) + " bytes");
    if (n <= opt.linear_max) return mobius_sieve_linear(n);
    return mobius_sieve_segmented(n, opt.segment_size, opt.threads);
}

int mobius_oracle(std::uint64_t k) {
    if (k == 0) throw std::invalid_argument("mobius_oracle: k must be >= 1");
    int sign = 1;
    for (std::uint64_t d = 2; d * d <= k; d += (d == 2) ? 1 : 2) {
        if (k % d == 0) {
            k /= d;
            if (k % d == 0) return 0;  // squared factor
            sign = -sign;
        }
    }
    if (k > 1) sign = -sign;
    return sign;
}

std::int64_t mertens(const MobiusTable& table, std::uint64_t n) {
    if (n == 0 || n > table.limit) throw std::invalid_argument("mertens: n out of range");
    std::int64_t sum = 0;
    for (std::uint64_t k = 1; k <= n; ++k) sum += table.values[k];
    return sum;
}

std::uint64_t squarefree_count(const MobiusTable& table, std::uint64_t n) {
    if (n == 0 || n > table.limit) throw std::invalid_argument("squarefree_count: n out of range");
    std::uint64_t q = 0;
    for (std::uint64_t k = 1; k <= n; ++k) q += (table.values[k] != 0);
    return q;
}

int nu(double x) {
    if (!std::isfinite(x) || x < 0.0)
        throw std::invalid_argument("nu: x must be finite and >= 0");
    if (x < 9007199254740992.0)  // 2^53: direct truncation is exact
        return static_cast<int>(static_cast<std::uint64_t>(x) & 1u);
    // Above 2^53 every representable double is an integer; fmod is exact.
    return static_cast<int>(std::fmod(x, 2.0));
}

double abs_mobius_partial(const MobiusTable& table, std::uint64_t n, double sigma) {
    if (!std::isfinite(sigma) || sigma <= 0.0)
        throw std::invalid_argument("abs_mobius_partial: sigma must be > 0");
    if (n == 0 || n > table.limit)
        throw std::invalid_argument("abs_mobius_partial: n out of range");
    neumaier_sum acc;
    for (std::uint64_t k = 1; k <= n; ++k)
        if (table.values[k] != 0)
            acc.add(std::pow(static_cast<double>(k), -sigma));
    return acc.value();
}

void save_mobius_cache(const MobiusTable& table, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw std::runtime_error("save_mobius_cache: cannot open " + path);
    os.write(kCacheMagic, 8);
    unsigned char len[8];
    for (int i = 0; i < 8; ++i)
        len[i] = static_cast<unsigned char>((table.limit >> (8 * i)) & 0xFF);
    os.write(reinterpret_cast<const char*>(len), 8);
    os.write(reinterpret_cast<const char*>(table.values.data() + 1),
             static_cast<std::streamsize>(table.limit));
    if (!os) throw std::runtime_error("save_mobius_cache: write failed for " + path);
}

MobiusTable load_mobius_cache(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("load_mobius_cache: cannot open " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kCacheMagic, 8) != 0)
        throw std::runtime_error("load_mobius_cache: bad magic in " + path);
    unsigned char len[8];
    is.read(reinterpret_cast<char*>(len), 8);
    if (!is) throw std::runtime_error("load_mobius_cache: truncated header in " + path);
    std::uint64_t n = 0;
    for (int i = 0; i < 8; ++i) n |= static_cast<std::uint64_t>(len[i]) << (8 * i);
    if (n == 0) throw std::runtime_error("load_mobius_cache: empty table in " + path);

    MobiusTable t;
    t.limit = n;
    t.values.assign(n + 1, 0);
    is.read(reinterpret_cast<char*>(t.values.data() + 1),
            static_cast<std::streamsize>(n));
    if (static_cast<std::uint64_t>(is.gcount()) != n)
        throw std::runtime_error("load_mobius_cache: length mismatch in " + path);
    is.peek();
    if (!is.eof())
        throw std::runtime_error("load_mobius_cache: trailing bytes in " + path);
    for (std::uint64_t k = 1; k <= n; ++k)
        if (t.values[k] < -1 || t.values[k] > 1)
            throw std::runtime_error("load_mobius_cache: corrupt entry in " + path);
    return t;
}

} // namespace munu
