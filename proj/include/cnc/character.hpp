#pragma once

#include "cnc/eisenstein.hpp"
#include "cnc/field.hpp"
#include "cnc/int_math.hpp"

#include <complex>
#include <cstdint>
#include <vector>

namespace cnc {

class CubicCharacter {
public:
    static constexpr std::int8_t kZero = -1;

    CubicCharacter() = default;
    CubicCharacter(u64 q, std::vector<std::int8_t> table);

    u64 modulus() const { return q_; }
    // Exponent e with chi(n) = w^e, or kZero when gcd(n, q) > 1.
    std::int8_t exponent(i64 n) const { return table_[mod_floor(n, q_)]; }
    EisensteinInt value(i64 n, int power = 1) const;
    bool in_kernel(i64 n) const { return exponent(n) == 0; }
    const std::vector<u64>& kernel() const { return kernel_; }
    const std::vector<std::int8_t>& table() const { return table_; }
    const Factorization& modulus_factorization() const { return qf_; }
    CubicCharacter squared() const;

private:
    u64 q_ = 1;
    Factorization qf_;
    std::vector<std::int8_t> table_;
    std::vector<u64> kernel_;
};

// chi^k(n) for k in {1, 2}.
inline EisensteinInt chi_pow(const CubicCharacter& c, i64 n, int k) { return c.value(n, k); }

// All primitive order-3 characters modulo q, one per conjugate pair, canonically normalized.
std::vector<CubicCharacter> primitive_cubic_characters(u64 q);

// Canonical primitive order-3 character modulo q (first of primitive_cubic_characters).
CubicCharacter character_mod(u64 q);

// Character cutting out K: chi(p) = 1 exactly for primes splitting in K.
CubicCharacter character_for_field(const CubicField& K);

// Residues mod d of the projection of E onto Z/dZ; d must be supported on primes of q.
class EpsilonSet {
public:
    // cap_factor bounds the exponent of p in d1 by cap_factor * max(1, v_p(d)).
    EpsilonSet(const CubicCharacter& c, u64 d, int cap_factor = 3);
    u64 modulus() const { return d_; }
    bool contains(u64 n) const { return members_[n % d_]; }
    std::size_t size() const;

private:
    u64 d_;
    std::vector<bool> members_;
};

bool epsilon_member(const CubicCharacter& c, u64 d, u64 n, int cap_factor = 3);

struct LValueReport {
    std::complex<long double> l1_closed;
    std::complex<long double> l1_series;
    long double product = 0;  // |L(1, chi)|^2 from the closed form
    long double discrepancy = 0;
    u64 series_terms = 0;
};

// L(1,chi) L(1,chi^2) by the even-character closed form, cross-checked against the
// partial Dirichlet series with a digamma tail correction. Throws Nonconvergence above tol.
LValueReport l_value_product(const CubicCharacter& c, long double tol);

} // namespace cnc
