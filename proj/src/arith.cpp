#include "cnc/arith.hpp"

#include "cnc/errors.hpp"

#include <stdexcept>

namespace cnc {

i64 chi_conv_pk(const CubicCharacter& c, u64 p, int k) {
    if (k == 0) return 1;
    const auto e = c.exponent(static_cast<i64>(p % c.modulus()));
    if (e == CubicCharacter::kZero) return 0;
    if (e == 0) return k + 1;
    // Inert: sum_{i+j=k} chi(p)^i chi(p)^{2j} cycles through 1, -1, 0.
    static constexpr i64 pattern[3] = {1, -1, 0};
    return pattern[k % 3];
}

namespace {

u64 r3_prime_power(const CubicCharacter& c, u64 p, int k) {
    const auto e = c.exponent(static_cast<i64>(p % c.modulus()));
    if (e == CubicCharacter::kZero) return 1;
    if (e == 0) return static_cast<u64>(k + 1) * static_cast<u64>(k + 2) / 2;
    return k % 3 == 0 ? 1 : 0;
}

} // namespace

u64 r3(const CubicCharacter& c, const Factorization& f) {
    u64 r = 1;
    for (const auto& [p, k] : f) {
        r *= r3_prime_power(c, p, k);
        if (r == 0) return 0;
    }
    return r;
}

u64 r3(const CubicCharacter& c, u64 n) {
    if (n == 0) throw Error(ErrorKind::Validation, "r3(0) is undefined");
    return r3(c, factor(n));
}

u64 r3_brute(const CubicCharacter& c, u64 n) {
    if (n == 0 || n > 1000000) throw Error(ErrorKind::OracleScale, "r3_brute requires 1 <= n <= 10^6");
    std::vector<u64> divs;
    for (u64 d = 1; d * d <= n; ++d)
        if (n % d == 0) {
            divs.push_back(d);
            if (d * d != n) divs.push_back(n / d);
        }
    EisensteinInt s{0, 0};
    for (u64 b : divs) {
        const EisensteinInt cb = c.value(static_cast<i64>(b), 1);
        if (cb.is_zero()) continue;
        const u64 m = n / b;
        for (u64 cc : divs) {
            if (m % cc) continue;
            s += cb * c.value(static_cast<i64>(cc), 2);
        }
    }
    if (!s.is_real() || s.a < 0) throw std::logic_error("r3_brute produced a non-real or negative value");
    return static_cast<u64>(s.a);
}

u64 tau3(const Factorization& f) {
    u64 r = 1;
    for (const auto& pp : f) r *= static_cast<u64>(pp.k + 1) * static_cast<u64>(pp.k + 2) / 2;
    return r;
}

} // namespace cnc
