#pragma once

#include "cnc/character.hpp"
#include "cnc/int_math.hpp"

namespace cnc {

// (chi * chi^2)(p^k).
i64 chi_conv_pk(const CubicCharacter& c, u64 p, int k);

// Number of ideals of norm n, evaluated multiplicatively.
u64 r3(const CubicCharacter& c, u64 n);
u64 r3(const CubicCharacter& c, const Factorization& f);

// Direct triple divisor sum sum_{abc=n} chi(b) chi^2(c); n <= 10^6.
u64 r3_brute(const CubicCharacter& c, u64 n);

// Number of ordered triples (a,b,c) with abc = n.
u64 tau3(const Factorization& f);

// Number of distinct prime factors.
inline int omega(const Factorization& f) { return static_cast<int>(f.size()); }

} // namespace cnc
