#include "doctest.h"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"

#include <numeric>
#include <random>

using namespace cnc;

TEST_SUITE("arith") {

TEST_CASE("factorization") {
    CHECK(factor(1).empty());
    CHECK(factor(49) == Factorization{{7, 2}});
    const u64 n = 2'000'000'000'033ULL;
    CHECK(unfactor(factor(n)) == n);
    for (const auto& pp : factor(n)) CHECK(is_prime(pp.p));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 2000; ++i) {
        const u64 m = (rng() >> 2) | 1;
        const auto f = factor_uncached(m);
        REQUIRE(unfactor(f) == m);
        for (const auto& pp : f) REQUIRE(is_prime(pp.p));
    }
    // Semiprimes with two large factors exercise the rho path.
    CHECK(factor(1000003ULL * 1000033ULL) == Factorization{{1000003, 1}, {1000033, 1}});
    CHECK(factor(2147483647ULL * 2147483629ULL) == Factorization{{2147483629ULL, 1}, {2147483647ULL, 1}});
    CHECK(factor(999983ULL * 999983ULL * 999983ULL) == Factorization{{999983, 3}});
}

TEST_CASE("primality against a sieve") {
    const auto ps = primes_up_to(200000);
    std::vector<bool> isp(200001, false);
    for (auto p : ps) isp[p] = true;
    for (u64 n = 0; n <= 200000; ++n) REQUIRE(is_prime(n) == isp[n]);
    CHECK(is_prime(18446744073709551557ULL));
    CHECK(!is_prime(3215031751ULL));
}

TEST_CASE("chi * chi^2 on prime powers") {
    const auto c = character_mod(7);
    CHECK(chi_conv_pk(c, 13, 2) == 3);
    CHECK(chi_conv_pk(c, 2, 1) == -1);
    CHECK(chi_conv_pk(c, 2, 2) == 0);
    CHECK(chi_conv_pk(c, 2, 3) == 1);
    CHECK(chi_conv_pk(c, 7, 0) == 1);
    CHECK(chi_conv_pk(c, 7, 4) == 0);
    // Against the defining convolution.
    for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 13ULL, 29ULL, 43ULL})
        for (int k = 0; k <= 8; ++k) {
            EisensteinInt s{0, 0};
            u64 pi = 1;
            for (int i = 0; i <= k; ++i, pi *= p) s += c.value(static_cast<i64>(pi)) * c.value(static_cast<i64>(ipow_checked(p, k - i)), 2);
            CHECK(s.is_real());
            CHECK(s.a == chi_conv_pk(c, p, k));
        }
}

TEST_CASE("r3 small values") {
    const auto c = character_mod(7);
    CHECK(r3(c, 1) == 1);
    CHECK(r3(c, 13) == 3);
    CHECK(r3(c, 2) == 0);
    CHECK(r3(c, 8) == 1);
    for (int k = 0; k < 10; ++k) CHECK(r3(c, ipow_checked(7, k)) == 1);
    CHECK(r3(c, 91) == 3);
    CHECK(r3_brute(c, 1) == 1);
    CHECK_THROWS_AS(r3_brute(c, 2'000'000), Error);
}

TEST_CASE("r3 equals the convolution oracle up to 2e4") {
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        for (u64 n = 1; n <= 20000; ++n) REQUIRE(r3(c, n) == r3_brute(c, n));
    }
}

TEST_CASE("r3 is multiplicative and invariant under q-power scaling") {
    std::mt19937_64 rng(5);
    for (u64 q : {7ULL, 9ULL, 13ULL}) {
        const auto c = character_mod(q);
        int pairs = 0;
        while (pairs < 10000) {
            const u64 m = rng() % 100000 + 1, n = rng() % 100000 + 1;
            if (std::gcd(m, n) != 1) continue;
            ++pairs;
            REQUIRE(r3(c, m * n) == r3(c, m) * r3(c, n));
        }
        for (u64 n = 1; n <= 2000; ++n)
            for (u64 d = 1; d <= 100000; d *= q) REQUIRE(r3(c, d * n) == r3(c, n));
    }
}

TEST_CASE("tau3") {
    CHECK(tau3(factor(1)) == 1);
    CHECK(tau3(factor(12)) == 18);
    u64 brute = 0;
    for (u64 a = 1; a <= 360; ++a)
        for (u64 b = 1; a * b <= 360; ++b)
            if (360 % (a * b) == 0) ++brute;
    CHECK(tau3(factor(360)) == brute);
}

}
