#include "doctest.h"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"
#include "cnc/parametrize.hpp"

#include <map>
#include <numeric>

using namespace cnc;

namespace {

const BinaryCubicForm kF({1, 0, 0, 2});
const BinaryCubicForm kF2({5, -3, -3, 3});

u64 phi_of(u64 n) { return euler_phi(factor(n)); }

} // namespace

TEST_SUITE("parametrize") {

TEST_CASE("trivial divisors reduce W to a congruence modulo q") {
    const auto c = character_mod(7);
    for (u64 alpha : c.kernel()) {
        const WSet w = wset(kF, c, alpha, 1, 1);
        std::vector<u64> expect;
        for (u64 b = 1; b <= 7; ++b)
            if (mod_floor(static_cast<i64>(kF.eval(1, static_cast<i64>(b)) - static_cast<i128>(alpha)), 7) == 0) expect.push_back(b);
        CHECK(w.members == expect);
    }
    CHECK_THROWS_AS(wset(kF, c, 1, 2, 1), Error);
    CHECK_THROWS_AS(wset(kF, c, 1, 1, 14), Error);
    CHECK_THROWS_AS(wset(kF, c, 2, 1, 1), Error);
}

TEST_CASE("lifted W counts equal the scan") {
    for (u64 q : {7ULL, 9ULL, 13ULL, 63ULL}) {
        const auto c = character_mod(q);
        std::vector<u64> ds{1};
        for (const auto& pp : c.modulus_factorization()) {
            const std::size_t n = ds.size();
            for (std::size_t i = 0; i < n; ++i)
                for (u64 v = ds[i] * pp.p; v <= q * q; v *= pp.p) ds.push_back(v);
        }
        for (const auto& F : {kF, kF2})
            for (u64 d1 : ds)
                for (u64 d2 : ds) {
                    if (d2 * q > 200000) continue;
                    for (u64 alpha : c.kernel()) CHECK(w_count(F, c, alpha, d1, d2) == wset(F, c, alpha, d1, d2).members.size());
                }
    }
}

TEST_CASE("W depends on d1 only through gcd(d1, d2 q)") {
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        for (const auto& F : {kF, kF2})
            for (u64 d2 = 1; d2 <= q * q; d2 *= q)
                for (u64 alpha : c.kernel())
                    for (u64 d1 = 1; d1 <= q * q * q; d1 *= q) {
                        const u64 d3 = std::gcd(d1, d2 * q);
                        CHECK(w_count(F, c, alpha, d1, d2) == w_count(F, c, alpha, d3, d2));
                    }
    }
    // Composite conductor: the alpha-sum is invariant.
    const auto c = character_mod(63);
    for (u64 d2 : {1ULL, 3ULL, 7ULL, 21ULL})
        for (u64 d1 : {1ULL, 3ULL, 9ULL, 27ULL, 7ULL, 49ULL, 441ULL})
            CHECK(w_alpha_sum(kF2, c, d1, d2) == w_alpha_sum(kF2, c, std::gcd(d1, d2 * 63), d2));
    WCache cache(kF2, c);
    CHECK(cache.alpha_sum(27, 1) == cache.alpha_sum(9, 1));
    CHECK(cache.size() == 1);
}

TEST_CASE("phi-weighted W sums are bounded by q^2 rho+(d2)") {
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        for (const auto& F : {kF, kF2})
            for (u64 d2 = 1; d2 <= q * q; d2 *= q)
                for (u64 alpha : c.kernel()) {
                    u64 lhs = 0;
                    for (u64 d3 : divisors(factor(d2 * q))) lhs += phi_of(d2 * q / d3) * w_count(F, c, alpha, d3, d2);
                    CHECK(lhs <= q * q * rho_plus(F, d2));
                }
    }
}

TEST_CASE("branches: determinant and integral transformed form") {
    const auto c = character_mod(7);
    const auto R = RegionSpec::disc(1);
    for (const auto& F : {kF, kF2})
        for (u64 d1 : {1ULL, 7ULL, 49ULL})
            for (u64 d2 : {1ULL, 7ULL, 49ULL})
                for (u64 alpha : c.kernel())
                    for (u64 beta : wset(F, c, alpha, d1, d2).members) {
                        const ParamBranch br = make_branch(F, c, R, alpha, beta, d1, d2);
                        CHECK(br.det() == static_cast<i64>(d1 * d2 * 7));
                        for (i64 m = -3; m <= 3; ++m)
                            for (i64 n = -3; n <= 3; ++n) {
                                const i64 x = br.U[0][0] * m, y = br.U[1][0] * m + br.U[1][1] * n;
                                CHECK(br.transformed.eval(m, n) * static_cast<i128>(d2) == F.eval(x, y));
                            }
                    }
    CHECK_THROWS_AS(make_branch(kF, c, R, 1, 1, 1, 1), Error);  // F(1,1) = 3 is not 1 mod 7
}

TEST_CASE("decomposition identities at xi = 10 and 20") {
    const auto c = character_mod(7);
    const auto R = RegionSpec::disc(1);
    // Frozen from an independent enumeration of both sides.
    const auto r10 = q_decomposition_check(kF, c, R, 10);
    CHECK(r10.q_direct == 142);
    CHECK(r10.q1_at_xi == 138);
    const auto r20 = q_decomposition_check(kF, c, R, 20);
    CHECK(r20.lattice_points == 1257);
    CHECK(r20.q_direct == 668);
    CHECK(r20.q1_at_xi == 660);
    CHECK(r20.outer_ok());
    CHECK(r20.inner_ok());
    CHECK(r20.axis_term == 0);
    const auto s20 = q_decomposition_check(kF2, c, R, 20);
    CHECK(s20.q_direct == 210);
    CHECK(s20.q1_at_xi == 204);
    CHECK(s20.inner_ok());
}

TEST_CASE("empty and degenerate regions") {
    const auto c = character_mod(7);
    const auto r = q_decomposition_check(kF, c, RegionSpec::disc(1), 0.1L);
    CHECK(r.q_direct == 0);
    CHECK(r.q1_total == 0);
    CHECK(r.branch_total == 0);
    CHECK(r.lattice_points == 1);
}

TEST_CASE("the m = 0 column is outside every branch") {
    // Y^3 has a value in the kernel, so (0, n) contributes; the identity needs the axis term.
    const auto c = character_mod(7);
    const BinaryCubicForm G({2, 0, 0, 1});
    const auto r = q_decomposition_check(G, c, RegionSpec::disc(1), 15);
    CHECK(r.axis_term > 0);
    CHECK(r.outer_ok());
    CHECK(r.inner_ok());
    CHECK(r.q1_at_xi != r.branch_total);
}

TEST_CASE("every contributing point has exactly one parametrization") {
    // 2X^3 + Y^3 takes kernel values on q | m, so branches with d1 > 1 are populated.
    const BinaryCubicForm G({2, 0, 0, 1});
    bool saw_d1 = false;
    for (u64 q : {7ULL, 9ULL}) {
        const auto c = character_mod(q);
        const auto R = RegionSpec::disc(1);
        for (const auto& F : {kF, kF2, G}) {
            std::map<std::pair<i64, i64>, int> hits;
            for (const auto& p : branch_points(F, c, R, 20)) {
                ++hits[{p.m, p.n}];
                CHECK(p.m == static_cast<i64>(p.d1) * p.m1);
                CHECK(p.n == static_cast<i64>(p.beta) * p.m1 + static_cast<i64>(p.d2 * q) * p.n1);
                if (p.d1 > 1) saw_d1 = true;
            }
            for (const auto& [x, k] : hits) CHECK(k == 1);
            for (i64 m = -20; m <= 20; ++m)
                for (i64 n = -20; n <= 20; ++n) {
                    if (m == 0 || !R.contains(m, n, 20)) continue;
                    if (std::gcd(std::gcd(m, n), static_cast<i64>(q)) != 1) continue;
                    const i128 v = F.eval(m, n);
                    if (r3(c, static_cast<u64>(v < 0 ? -v : v)) == 0) continue;
                    CHECK(hits.count({m, n}) == 1);
                }
        }
    }
    CHECK(saw_d1);
}

} // TEST_SUITE
