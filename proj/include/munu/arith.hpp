#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace munu {

// Dense table of mu(1..N). Immutable after construction; safe to share
// across threads.
struct MobiusTable {
    std::uint64_t limit = 0;      // N
    std::vector<std::int8_t> values;  // size N+1, values[k] = mu(k); values[0] unused

    int mu(std::uint64_t k) const;  // throws std::out_of_range for k=0 or k>limit
};

struct SieveOptions {
    // Above linear_max entries the sieve switches to segmented mode so the
    // auxiliary memory stays bounded by a few segment-sized buffers.
    std::uint64_t linear_max = std::uint64_t{1} << 26;
    std::uint64_t segment_size = std::uint64_t{1} << 22;
    std::uint64_t max_table_bytes = std::uint64_t{1} << 31;
    unsigned threads = 1;  // segmented mode only; output is identical for any count
};

MobiusTable mobius_sieve(std::uint64_t n, const SieveOptions& opt = {});
MobiusTable mobius_sieve_linear(std::uint64_t n);
MobiusTable mobius_sieve_segmented(std::uint64_t n, std::uint64_t segment_size,
                                   unsigned threads = 1);

// mu(k) by trial division. Slow; exists to cross-check the sieves.
int mobius_oracle(std::uint64_t k);

// M(n) = sum_{k<=n} mu(k).
std::int64_t mertens(const MobiusTable& table, std::uint64_t n);

// Q(n) = sum_{k<=n} |mu(k)| = number of squarefree k <= n.
std::uint64_t squarefree_count(const MobiusTable& table, std::uint64_t n);

// nu(x) = floor(x) mod 2. Equal to 2{x/2} - {x} in exact arithmetic, but
// computed by integer floor parity, which is exact for every representable
// input (the fractional-part form loses the jump points under rounding).
int nu(double x);

// sum_{k<=n} |mu(k)| / k^sigma, ascending k, compensated accumulation.
double abs_mobius_partial(const MobiusTable& table, std::uint64_t n, double sigma);

// Cache file: 8-byte magic "MUNV0001", 8-byte little-endian N, then N signed
// bytes holding mu(1..N).
void save_mobius_cache(const MobiusTable& table, const std::string& path);
MobiusTable load_mobius_cache(const std::string& path);

} // namespace munu
