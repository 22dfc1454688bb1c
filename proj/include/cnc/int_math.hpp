#pragma once

#include <cstdint>
#include <vector>

namespace cnc {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;
using u128 = unsigned __int128;

struct PrimePower {
    u64 p;
    int k;
    bool operator==(const PrimePower&) const = default;
};

// Sorted ascending by prime.
using Factorization = std::vector<PrimePower>;

inline u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(static_cast<u128>(a) * b % m); }
u64 powmod(u64 a, u64 e, u64 m);

// Least nonnegative residue of a mod m, m >= 1.
inline u64 mod_floor(i128 a, u64 m) {
    i128 r = a % static_cast<i128>(m);
    if (r < 0) r += m;
    return static_cast<u64>(r);
}

// b^e; throws Overflow when the result exceeds 2^63.
u64 ipow_checked(u64 b, int e);

u64 isqrt(u64 n);
bool is_square(i128 n);
// Largest r with r^3 <= n.
u64 icbrt(u64 n);

bool is_prime(u64 n);
std::vector<std::uint32_t> primes_up_to(std::uint32_t n);

// Complete factorization; n >= 1. Results are memoized up to a fixed number of entries.
Factorization factor(u64 n);
// Same, bypassing the memo.
Factorization factor_uncached(u64 n);

std::vector<u64> divisors(const Factorization& f);
u64 euler_phi(const Factorization& f);
u64 euler_phi(u64 n);
u64 radical(u64 n);
int valuation(u64 n, u64 p);
// Integer whose factorization is f.
u64 unfactor(const Factorization& f);

// Smallest primitive root modulo p^k for an odd prime p, or modulo 2, 4.
u64 primitive_root_prime_power(u64 p, int k);

} // namespace cnc
