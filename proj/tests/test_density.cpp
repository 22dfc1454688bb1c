#include "doctest.h"

#include "cnc/arith.hpp"
#include "cnc/density.hpp"
#include "cnc/errors.hpp"

#include <cmath>

using namespace cnc;

namespace {

const BinaryCubicForm kF({1, 0, 0, 2});
const BinaryCubicForm kF2({5, -3, -3, 3});

} // namespace

TEST_SUITE("density") {

TEST_CASE("exact and floating rho+ densities agree") {
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL})
        for (int j = 0; j <= 8; ++j)
            for (const auto& F : {kF, kF2})
                CHECK(std::fabs(to_ld(rho_plus_density_exact(F, p, j)) - rho_plus_density(F, p, j)) < 1e-15L);
}

TEST_CASE("prefactor by splitting type") {
    const auto c = character_mod(7);
    CHECK(kp_prefactor(c, 13) == BigRat(144, 169));  // 13 = -1 mod 7 is a cube
    CHECK(kp_prefactor(c, 2) == BigRat(7, 4));
    CHECK(kp_prefactor(c, 5) == BigRat(31, 25));
}

TEST_CASE("K_q by W-sums: X^3 + 2Y^3 modulo 7 is exactly 3/2") {
    // Only d2 = 1 contributes, with four alpha-beta pairs and none for d1 > 1.
    const auto c = character_mod(7);
    const auto r0 = kq_wsum(kF, c, 0);
    CHECK(std::fabs(r0.value - 72.0L / 49) < 1e-15L);
    const auto r = kq_wsum(kF, c, 6);
    CHECK(std::fabs(r.value + r.tail_d - 1.5L) < 1e-15L);
    CHECK(std::fabs(r.tail_d1) < 1e-18L);
    CHECK(std::fabs(r.value - 1.5L) <= r.tail() + 1e-15L);
}

TEST_CASE("K_q: W-sum value is stable under doubling the cap") {
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        for (const auto& F : {kF, kF2}) {
            const auto a = kq_wsum(F, c, 3), b = kq_wsum(F, c, 6);
            CHECK(b.value >= a.value - 1e-15L);
            CHECK(std::fabs(b.value - a.value) <= a.tail() + 1e-15L);
            CHECK(b.tail() <= a.tail() + 1e-15L);
            CHECK(b.value > 0);
        }
    }
}

TEST_CASE("K_q: the limit route differs from the W-sum by its zero-value tail") {
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        for (const auto& F : {kF, kF2}) {
            const auto w = kq_wsum(F, c, 8);
            const auto lim = kq_limit(F, c, q == 13 ? 2 : 3);
            // At q = 9 the zero-value tail only dominates from k = 3 on.
            for (const auto& st : lim)
                if (q != 9 || st.k >= 3) CHECK(std::fabs(st.value - w.value) <= st.tail + w.tail() + 1e-12L);
        }
    }
    // Frozen limit values at q = 7.
    const auto lim = kq_limit(kF, character_mod(7), 2);
    CHECK(std::fabs(lim[0].value - 75.0L / 49) < 1e-15L);
    CHECK(std::fabs(lim[1].value - 75.0L / 49) < 1e-15L);
    CHECK_THROWS_AS(kq_limit(kF, character_mod(7), 6), Error);
}

TEST_CASE("K_pg: contraction equals the five-coordinate count") {
    // Frozen from an independent enumeration of F(x) = P(y,z,t) mod p^k.
    const auto K = make_builtin_field(BuiltinField::Q7);
    const auto c = character_for_field(K);
    struct Row {
        const BinaryCubicForm* F;
        u64 p;
        int k;
        BigRat expect;
    };
    const Row rows[] = {{&kF, 2, 1, BigRat(1)},    {&kF, 3, 2, BigRat(1)},          {&kF, 13, 1, BigRat(1897, 2197)},
                        {&kF2, 5, 1, BigRat(101, 125)}, {&kF2, 2, 2, BigRat(1)}, {&kF2, 13, 1, BigRat(1897, 2197)}};
    for (const auto& r : rows) {
        const auto b = kpg_brute(K, c, *r.F, r.p, r.k);
        CHECK(b.exact == r.expect);
        CHECK(kpg_exhaustive(K, *r.F, r.p, r.k) == r.expect);
        CHECK(b.s_route == "histogram");
    }
    CHECK_THROWS_AS(kpg_brute(K, c, kF, 7, 1), Error);
}

TEST_CASE("K_pg matches the K_p partial sum at matched depth") {
    const auto K = make_builtin_field(BuiltinField::Q7);
    const auto c = character_for_field(K);
    for (const auto& F : {kF, kF2})
        for (u64 p : {2ULL, 3ULL, 5ULL, 13ULL, 29ULL, 31ULL})
            for (int k = 1; k <= 3; ++k) {
                if (std::pow(static_cast<long double>(p), 2 * k) > 2e7L) continue;
                const auto b = kpg_brute(K, c, F, p, k);
                CHECK(b.matched_depth);
                const auto s = kp(F, c, p);
                CHECK(std::fabs(s.value - b.value) <= b.trunc_bound + s.tail + 1e-12L);
            }
    // Large p takes the closed-form S route.
    const auto b = kpg_brute(K, c, kF2, 43, 2);
    CHECK(b.s_route == "closed");
    CHECK(b.matched_depth);
}

TEST_CASE("K_p: series terms against brute rho+") {
    const auto c = character_mod(7);
    for (const auto& F : {kF, kF2})
        for (u64 p : {2ULL, 3ULL, 5ULL, 11ULL}) {
            u64 pj = 1;
            for (int j = 0; pj * pj <= 2'000'000; ++j, pj *= p)
                CHECK(std::fabs(rho_plus_density(F, p, j) - static_cast<long double>(rho_plus_brute(F, pj)) / (static_cast<long double>(pj) * pj)) <
                      1e-15L);
            CHECK(kp(F, c, p).value > 0);
        }
    CHECK_THROWS_AS(kp(kF, c, 7), Error);
    CHECK_THROWS_AS(kp(kF, c, 9), Error);
}

TEST_CASE("K_p: inert prime without roots has series exactly 1") {
    // rho-(p) = 0 gives D(3i+1) = D(3i+2) = D(3i+3) = p^{-2(i+1)}; the pattern 1,-1,0 sums each block to 0.
    const auto c = character_mod(7);
    for (u64 p : {19ULL, 37ULL, 61ULL, 67ULL}) {
        const auto r = kp(kF, c, p);
        CHECK_FALSE(r.split);
        CHECK(std::fabs(r.series - 1) < 1e-15L);
        const long double P = static_cast<long double>(p);
        CHECK(std::fabs(r.value - (1 + 1 / P + 1 / (P * P))) < 1e-15L);
    }
}

TEST_CASE("K_p: primes of bad reduction") {
    // disc(X^3 + 2Y^3) = -108, so 2 and 3 need deeper lifts but still converge.
    const auto c = character_mod(7);
    const auto r2 = kp(kF, c, 2), r3p = kp(kF, c, 3);
    CHECK(r2.nu_max >= 6);
    CHECK(std::isfinite(r2.value));
    CHECK(std::isfinite(r3p.value));
    CHECK(r2.tail < 1e-9L);
}

TEST_CASE("K(F): Euler product against an independent product") {
    const auto K = make_builtin_field(BuiltinField::Q7);
    const auto c = character_for_field(K);
    const auto rep = k_total(kF, c, K, 1000, 1e-12L, 6);
    CHECK(rep.h4.over_k);
    CHECK(rep.k_total > 0);
    CHECK(rep.l_product > 0);
    long double prod = 1, good = 1;
    for (const auto& row : rep.primes) {
        prod *= row.kp;
        if (row.p >= 11) good *= row.kp;
    }
    CHECK(std::fabs(prod - rep.euler_product) < 1e-12L * prod);
    CHECK(std::fabs(rep.k_total - rep.kq.value * rep.euler_product) < 1e-12L);
    // Frozen from a separate series evaluation over 11 <= p <= 997, and its change from 1000 to 2000.
    CHECK(std::fabs(good - 1.0772436671952828L) < 1e-9L);
    CHECK(std::fabs(rep.tail_estimate - 0.0193808693L) < 1e-6L);
    // A form with a linear factor over Q is rejected.
    CHECK_THROWS_AS(k_total(BinaryCubicForm({1, 0, 0, -1}), c, K, 100, 1e-12L), Error);
}

} // TEST_SUITE
