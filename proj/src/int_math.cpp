#include "cnc/int_math.hpp"

#include "cnc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <unordered_map>

namespace cnc {

u64 powmod(u64 a, u64 e, u64 m) {
    u64 r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

u64 ipow_checked(u64 b, int e) {
    u128 r = 1;
    for (int i = 0; i < e; ++i) {
        r *= b;
        if (r > (static_cast<u128>(1) << 63)) throw Error(ErrorKind::Overflow, "power exceeds 2^63");
    }
    return static_cast<u64>(r);
}

u64 isqrt(u64 n) {
    u64 r = static_cast<u64>(std::sqrt(static_cast<long double>(n)));
    while (r > 0 && static_cast<u128>(r) * r > n) --r;
    while (static_cast<u128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

bool is_square(i128 n) {
    if (n < 0) return false;
    if (n > static_cast<i128>(~0ULL)) {
        // Beyond 64 bits: long double estimate then exact correction.
        long double s = std::sqrt(static_cast<long double>(n));
        i128 r = static_cast<i128>(s);
        for (i128 c = r - 2; c <= r + 2; ++c)
            if (c >= 0 && c * c == n) return true;
        return false;
    }
    u64 r = isqrt(static_cast<u64>(n));
    return static_cast<i128>(r) * r == n;
}

u64 icbrt(u64 n) {
    u64 r = static_cast<u64>(std::cbrt(static_cast<long double>(n)));
    auto cube = [](u64 x) { return static_cast<u128>(x) * x * x; };
    while (r > 0 && cube(r) > n) --r;
    while (cube(r + 1) <= n) ++r;
    return r;
}

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
        if (n % p == 0) return n == p;
    }
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    auto witness = [&](u64 a) {
        a %= n;
        if (a == 0) return false;
        u64 x = powmod(a, d, n);
        if (x == 1 || x == n - 1) return false;
        for (int i = 1; i < s; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) return false;
        }
        return true;
    };
    // Base sets deterministic below the stated bounds.
    if (n < 3215031751ULL) {
        for (u64 a : {2ULL, 3ULL, 5ULL, 7ULL})
            if (witness(a)) return false;
        return true;
    }
    for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL})
        if (witness(a)) return false;
    return true;
}

std::vector<std::uint32_t> primes_up_to(std::uint32_t n) {
    std::vector<std::uint32_t> out;
    if (n < 2) return out;
    std::vector<bool> comp(n + 1, false);
    for (std::uint32_t i = 2; i <= n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (u64 j = static_cast<u64>(i) * i; j <= n; j += i) comp[j] = true;
    }
    return out;
}

namespace {

constexpr std::uint32_t kTrialLimit = 10000;
constexpr std::size_t kMemoCap = std::size_t{1} << 20;

const std::vector<std::uint32_t>& small_primes() {
    static const std::vector<std::uint32_t> ps = primes_up_to(kTrialLimit);
    return ps;
}

// Brent's cycle variant of Pollard rho; n odd composite.
u64 rho_brent(u64 n) {
    for (u64 c = 1;; ++c) {
        u64 y = 2, x = 2, g = 1, q = 1, ys = 2;
        const u64 m = 128;
        u64 r = 1;
        auto f = [&](u64 v) { return (mulmod(v, v, n) + c) % n; };
        do {
            x = y;
            for (u64 i = 0; i < r; ++i) y = f(y);
            u64 k = 0;
            while (k < r && g == 1) {
                ys = y;
                for (u64 i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = mulmod(q, x > y ? x - y : y - x, n);
                }
                g = std::gcd(q, n);
                k += m;
            }
            r <<= 1;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = std::gcd(x > ys ? x - ys : ys - x, n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

void split_large(u64 n, std::vector<u64>& out) {
    if (n == 1) return;
    if (is_prime(n)) {
        out.push_back(n);
        return;
    }
    u64 r = isqrt(n);
    if (r * r == n) {
        split_large(r, out);
        split_large(r, out);
        return;
    }
    u64 d = rho_brent(n);
    split_large(d, out);
    split_large(n / d, out);
}

} // namespace

Factorization factor_uncached(u64 n) {
    if (n == 0) throw Error(ErrorKind::Validation, "factor(0)");
    if (n > (static_cast<u64>(1) << 63)) throw Error(ErrorKind::Overflow, "factor argument above 2^63");
    Factorization f;
    for (std::uint32_t p : small_primes()) {
        // Once p^3 > n the cofactor has at most two prime factors, all >= p.
        if (static_cast<u128>(p) * p * p > n) break;
        if (n % p) continue;
        int k = 0;
        while (n % p == 0) {
            n /= p;
            ++k;
        }
        f.push_back({p, k});
    }
    if (n > 1) {
        std::vector<u64> rest;
        split_large(n, rest);
        std::sort(rest.begin(), rest.end());
        for (u64 p : rest) {
            if (!f.empty() && f.back().p == p)
                ++f.back().k;
            else
                f.push_back({p, 1});
        }
    }
    std::sort(f.begin(), f.end(), [](const PrimePower& a, const PrimePower& b) { return a.p < b.p; });
    return f;
}

Factorization factor(u64 n) {
    static std::mutex mu;
    static std::unordered_map<u64, Factorization> memo;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = memo.find(n);
        if (it != memo.end()) return it->second;
    }
    Factorization f = factor_uncached(n);
    {
        std::lock_guard<std::mutex> lock(mu);
        if (memo.size() < kMemoCap) memo.emplace(n, f);
    }
    return f;
}

std::vector<u64> divisors(const Factorization& f) {
    std::vector<u64> d{1};
    for (const auto& [p, k] : f) {
        std::size_t base = d.size();
        u64 pk = 1;
        for (int e = 1; e <= k; ++e) {
            pk *= p;
            for (std::size_t i = 0; i < base; ++i) d.push_back(d[i] * pk);
        }
    }
    std::sort(d.begin(), d.end());
    return d;
}

u64 euler_phi(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, k] : f) {
        r *= p - 1;
        for (int e = 1; e < k; ++e) r *= p;
    }
    return r;
}

u64 euler_phi(u64 n) { return euler_phi(factor(n)); }

u64 radical(u64 n) {
    u64 r = 1;
    for (const auto& pp : factor(n)) r *= pp.p;
    return r;
}

int valuation(u64 n, u64 p) {
    if (n == 0) return 1 << 30;
    int v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

u64 unfactor(const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, k] : f) r *= ipow_checked(p, k);
    return r;
}

u64 primitive_root_prime_power(u64 p, int k) {
    u64 m = ipow_checked(p, k);
    if (m == 2) return 1;
    if (m == 4) return 3;
    if (p == 2) throw Error(ErrorKind::BadModulus, "no primitive root modulo 2^k, k>2");
    u64 phi = m / p * (p - 1);
    Factorization pf = factor(phi);
    for (u64 g = 2; g < m; ++g) {
        if (g % p == 0) continue;
        bool ok = true;
        for (const auto& pp : pf) {
            if (powmod(g, phi / pp.p, m) == 1) {
                ok = false;
                break;
            }
        }
        if (ok) return g;
    }
    throw Error(ErrorKind::BadModulus, "no primitive root found");
}

} // namespace cnc
