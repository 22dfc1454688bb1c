#pragma once

#include "cnc/character.hpp"
#include "cnc/congruence.hpp"
#include "cnc/field.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace cnc {

using BigRat = boost::multiprecision::cpp_rational;

long double to_ld(const BigRat& r);

// rho+(p^j) / p^{2j} as an exact rational.
BigRat rho_plus_density_exact(const BinaryCubicForm& F, u64 p, int j);

// (1 - chi(p)/p)(1 - chi^2(p)/p): (1 - 1/p)^2 when chi(p) = 1, else 1 + 1/p + 1/p^2.
BigRat kp_prefactor(const CubicCharacter& c, u64 p);

struct KpResult {
    u64 p = 0;
    bool split = false;
    long double prefactor = 0;
    long double series = 0;  // sum over nu of rho+(p^nu) p^{-2nu} (chi*chi^2)(p^nu)
    long double value = 0;   // prefactor * series
    int nu_max = 0;
    long double tail = 0;    // estimate of the omitted terms
};

// Local density at p not dividing q; stops after three consecutive terms below tol with nu >= 6.
KpResult kp(const BinaryCubicForm& F, const CubicCharacter& c, u64 p, long double tol = 1e-12L);

struct KqLimitStep {
    int k = 0;
    u64 count = 0;          // #{x mod q^k : F(x) in E_{q^k}}
    long double value = 0;  // 3 count / q^{2k}
    long double tail = 0;   // 3 sum_{p|q} rho+(p^{k v_p(q)}) / p^{2k v_p(q)}
};

// The limit route for k = 1..k_max; q^{2 k_max} <= 1e9.
std::vector<KqLimitStep> kq_limit(const BinaryCubicForm& F, const CubicCharacter& c, int k_max);

struct KqWsumResult {
    int cap = 0;
    long double value = 0;    // all divisor exponents <= cap
    long double tail_d = 0;   // exact: the d-sum beyond cap
    long double tail_d1 = 0;  // exact: the d1-sum beyond cap, since W depends on d1 only through gcd(d1, d2 q)
    long double tail_d2 = 0;  // bound: the d2-sum beyond cap, from the phi-weighted W inequality
    long double tail() const { return tail_d + tail_d1 + tail_d2; }
    std::size_t w_evaluations = 0;
};

// (3 phi(q)/q^2) sum_d d^-2 sum_{d1} sum_alpha sum_{d2} |W_{alpha,d1,d2}| / (d1 d2).
KqWsumResult kq_wsum(const BinaryCubicForm& F, const CubicCharacter& c, int cap);

struct KpgResult {
    u64 p = 0;
    int k = 0;
    BigRat exact;            // p^{-4k} #{(x,y,z,t) : F(x) = P(y,z,t) mod p^k}
    long double value = 0;
    long double trunc_bound = 0;  // bound on |K_pg - value|
    std::string s_route;     // "histogram" (exhaustive S table) or "closed" (closed-form S)
    bool matched_depth = false;   // exact agreement with the K_p partial sum at depth k
};

// Geometric density via S-count contraction; p not dividing q, p^{2k} <= 1e9.
KpgResult kpg_brute(const CubicField& K, const CubicCharacter& c, const BinaryCubicForm& F, u64 p, int k);

// Raw five-coordinate count; p^{5k} <= 1e9.
BigRat kpg_exhaustive(const CubicField& K, const BinaryCubicForm& F, u64 p, int k);

struct DensityPrimeRow {
    u64 p = 0;
    long double kp = 0;
    int nu_max = 0;
    long double tail = 0;
};

struct DensityReport {
    IrreducibilityReport h4;
    std::vector<DensityPrimeRow> primes;  // p <= p_max, p not dividing q
    KqWsumResult kq;
    u64 p_max = 0;
    long double euler_product = 0;          // product of K_p over p <= p_max
    long double euler_product_doubled = 0;  // same over p <= 2 p_max
    long double tail_estimate = 0;          // |doubled / product - 1|
    long double k_total = 0;                // K_q * euler_product
    long double l_product = 0;              // L(1,chi) L(1,chi^2)
    long double tol = 0;
};

// K(F) = K_q prod_p K_p; F must be irreducible over K.
DensityReport k_total(const BinaryCubicForm& F, const CubicCharacter& c, const CubicField& K, u64 p_max, long double tol,
                      int wsum_cap = 8);

} // namespace cnc
