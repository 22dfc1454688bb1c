#pragma once

#include "cnc/character.hpp"
#include "cnc/field.hpp"
#include "cnc/int_math.hpp"
#include "cnc/region.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cnc {

// F(X,Y) = a0 X^3 + a1 X^2 Y + a2 X Y^2 + a3 Y^3.
struct BinaryCubicForm {
    std::array<i64, 4> a{};
    i64 disc = 0;
    i64 height = 0;

    BinaryCubicForm() = default;
    explicit BinaryCubicForm(const std::array<i64, 4>& coeffs);

    i128 eval(i64 x, i64 y) const {
        const i128 X = x, Y = y;
        return a[0] * X * X * X + a[1] * X * X * Y + a[2] * X * Y * Y + a[3] * Y * Y * Y;
    }
    u64 eval_mod(i64 x, i64 y, u64 m) const;
    std::string str() const;
};

// Parses "a0,a1,a2,a3"; Validation error on wrong arity.
BinaryCubicForm parse_form(const std::string& s);

// Work cap on tree-lifting nodes.
inline constexpr u64 kLiftWorkCap = 10'000'000;

// Roots of f(x) = c0 + c1 x + c2 x^2 + c3 x^3 modulo p^k; disc_hint = disc(f) or a multiple.
// Simple roots modulo p lift uniquely; others are resolved by tree lifting.
u64 count_roots_prime_power(const std::array<i64, 4>& f_low, i64 disc_hint, u64 p, int k, u64 only_class_mod_p = ~u64{0});

struct LocalRootCounts {
    u64 minus = 0;  // roots a of F(a,1) mod p^k
    u64 zero = 0;   // roots e = 0 mod p of F(1,e) mod p^k
};
LocalRootCounts local_root_counts(const BinaryCubicForm& F, u64 p, int k);

u64 rho_minus(const BinaryCubicForm& F, u64 s);
u64 rho_plus(const BinaryCubicForm& F, u64 s);
u64 rho_star(const BinaryCubicForm& F, u64 s);
u64 rho_plus_prime_power(const BinaryCubicForm& F, u64 p, int k);
u64 rho_star_prime_power(const BinaryCubicForm& F, u64 p, int k);
// rho^+(p^k) / p^{2k}, valid beyond the range where p^{2k} fits in 64 bits.
long double rho_plus_density(const BinaryCubicForm& F, u64 p, int k);

// Exhaustive oracles; s^2 <= 4e9.
u64 rho_minus_brute(const BinaryCubicForm& F, u64 s);
u64 rho_plus_brute(const BinaryCubicForm& F, u64 s);
u64 rho_star_brute(const BinaryCubicForm& F, u64 s);

// |Lambda(s,F) ∩ R(xi)|, optionally restricted to gcd(m, q) = 1. Includes the origin.
u64 lambda_count(const BinaryCubicForm& F, u64 s, const RegionSpec& R, long double xi, std::optional<u64> coprime_q = std::nullopt);

// Closed-form S(A, p^k) depending on v_p(A) and the splitting type; p must not divide q.
u64 s_count_closed(const CubicField& K, const CubicCharacter& c, u64 p, int k, int vA);
// Exhaustive count of P(y,z,t) = A mod p^k; p^{3k} <= 1e8.
u64 s_count_brute(const CubicField& K, u64 p, int k, u64 A);
// Histogram h[A] = S(A, p^k) over all residues A, from one exhaustive pass.
std::vector<u64> s_count_histogram(const CubicField& K, u64 p, int k);

struct IrreducibilityReport {
    bool over_q = false;
    bool over_k = false;
    bool disc_square = false;
    std::string reason;
};
// Hypothesis H4: F irreducible over K.
IrreducibilityReport check_irreducible_over_field(const BinaryCubicForm& F, const CubicField& K);

// Values of a cubic polynomial at 0, 1, 2, ... modulo s by forward differences.
class CubicStepper {
public:
    CubicStepper(const std::array<i64, 4>& f_low, u64 s);
    u64 value() const { return v_; }
    void step() {
        v_ = add(v_, d1_);
        d1_ = add(d1_, d2_);
        d2_ = add(d2_, d3_);
    }

private:
    u64 add(u64 x, u64 y) const {
        u64 r = x + y;
        return r >= s_ ? r - s_ : r;
    }
    u64 s_, v_, d1_, d2_, d3_;
};

} // namespace cnc
