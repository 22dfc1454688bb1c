#include "doctest.h"

#include "cnc/arith.hpp"
#include "cnc/delta.hpp"
#include "cnc/errors.hpp"

#include <cmath>
#include <numbers>

using namespace cnc;

TEST_SUITE("delta") {

TEST_CASE("small exact values") {
    // Frozen from an independent fine-grid evaluation with unit windows (step 0.001).
    const std::vector<i64> expect{1, 3, 1, 4, 1, 3, 1, 4, 1, 3};
    i64 total = 0;
    for (u64 n = 1; n <= 10; ++n) {
        const auto r = delta3(n, DeltaWeights::Unit);
        CHECK(r.value.a == expect[n - 1]);
        CHECK(r.sup_norm_sq == expect[n - 1] * expect[n - 1]);
        total += r.value.a;
    }
    CHECK(total == 22);
    CHECK(delta3(12, DeltaWeights::Unit).value.a == 5);
    CHECK(delta3(36, DeltaWeights::Unit).value.a == 6);
    CHECK(delta3(60, DeltaWeights::Unit).value.a == 11);
    CHECK(delta3(360, DeltaWeights::Unit).value.a == 21);
    for (u64 p : {3ULL, 5ULL, 101ULL, 99991ULL}) CHECK(delta3(p, DeltaWeights::Unit).value.a == 1);
    const auto c = character_mod(7);
    CHECK(delta3(1, DeltaWeights::Char, &c).sup_norm_sq == 1);
    CHECK_THROWS_AS(delta3(2, DeltaWeights::Char, nullptr), Error);
}

TEST_CASE("witness windows reproduce the value") {
    const auto c = character_mod(7);
    for (u64 n : {12ULL, 360ULL, 5040ULL, 91ULL * 13 * 13, 720720ULL}) {
        for (auto w : {DeltaWeights::Unit, DeltaWeights::Char}) {
            const auto r = delta3(n, w, &c);
            const auto& W = r.witness;
            CHECK(W.v1 >= 0);
            CHECK(W.v1 <= 1);
            CHECK(W.v2 >= 0);
            CHECK(W.v2 <= 1);
            EisensteinInt s{0, 0};
            for (u64 d1 : divisors(factor(n)))
                for (u64 d2 : divisors(factor(n))) {
                    if (n % (d1 * d2)) continue;
                    const long double l1 = std::log(static_cast<long double>(d1)), l2 = std::log(static_cast<long double>(d2));
                    if (!(l1 > W.u1 && l1 <= W.u1 + W.v1 && l2 > W.u2 && l2 <= W.u2 + W.v2)) continue;
                    s += w == DeltaWeights::Unit ? EisensteinInt{1, 0} : c.value(static_cast<i64>(d1)) * c.value(static_cast<i64>(d2), 2);
                }
            CHECK(s == r.value);
        }
    }
}

TEST_CASE("bounds: 1 <= Delta <= tau3 and character version below the square") {
    const auto c = character_mod(7);
    for (u64 n = 1; n <= 10000; ++n) {
        const auto f = factor(n);
        const auto u = delta3(f, DeltaWeights::Unit);
        REQUIRE(u.value.a >= 1);
        REQUIRE(static_cast<u64>(u.value.a) <= tau3(f));
        REQUIRE(delta3(f, DeltaWeights::Char, &c).sup_norm_sq <= u.sup_norm_sq);
    }
}

TEST_CASE("grid oracle matches the sweep on a sample") {
    const auto c = character_mod(7);
    for (u64 n : {12ULL, 360ULL, 720ULL, 1680ULL, 1999ULL, 2000ULL})
        for (auto w : {DeltaWeights::Unit, DeltaWeights::Char})
            CHECK(delta3_grid_oracle(n, w, &c, 0.005L).sup_norm_sq == delta3(n, w, &c).sup_norm_sq);
}

TEST_CASE("rho constant") {
    const long double closed = std::sqrt(3.0L) / std::numbers::pi_v<long double> - 1.0L / 3;
    CHECK(static_cast<double>(rho_constant()) == doctest::Approx(static_cast<double>(closed)).epsilon(1e-12));
    CHECK(static_cast<double>(rho_constant()) == doctest::Approx(0.21800).epsilon(1e-4));
}

TEST_CASE("moment sums") {
    const auto c = character_mod(7);
    const auto r = moment_sum(10, 1.0L, c, MomentMode::Plain);
    CHECK(static_cast<double>(r.sum) == doctest::Approx(22));
    CHECK(static_cast<double>(r.predicted_exponent) == doctest::Approx(0));
    const auto r2 = moment_sum(1000, 1.0L, c, MomentMode::CharSquared);
    CHECK(static_cast<double>(r2.predicted_exponent) == doctest::Approx(static_cast<double>(rho_constant())));
    long double direct = 0;
    for (u64 n = 1; n <= 1000; ++n) direct += delta3(n, DeltaWeights::Char, &c).sup_norm_sq;
    CHECK(static_cast<double>(r2.sum) == doctest::Approx(static_cast<double>(direct)));
    const auto r3m = moment_sum(1000, 2.0L, c, MomentMode::Plain);
    long double d2 = 0;
    for (u64 n = 1; n <= 1000; ++n) d2 += std::pow(2.0L, factor(n).size()) * delta3(n, DeltaWeights::Unit).value.a;
    CHECK(static_cast<double>(r3m.sum) == doctest::Approx(static_cast<double>(d2)));
    CHECK(static_cast<double>(r3m.predicted_exponent) == doctest::Approx(3.0));
}

}
