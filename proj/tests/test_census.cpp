#include "doctest.h"

#include "cnc/arith.hpp"
#include "cnc/census.hpp"
#include "cnc/errors.hpp"

#include <cmath>

using namespace cnc;

namespace {

const BinaryCubicForm kF({1, 0, 0, 2});

} // namespace

TEST_SUITE("census") {

TEST_CASE("frozen counts from an independent divisor-sum enumeration") {
    const auto c = character_mod(7);
    const auto disc = RegionSpec::disc(1);
    const auto q10 = q_empirical(kF, c, disc, 10);
    CHECK(q10.q == 142);
    CHECK(q10.points == 317);
    const auto q20 = q_empirical(kF, c, disc, 20);
    CHECK(q20.q == 668);
    CHECK(q20.points == 1257);
    CHECK(q_empirical(kF, c, RegionSpec::ellipse(2, 1), 10).q == 338);
    CHECK(q_empirical(BinaryCubicForm({5, -3, -3, 3}), c, disc, 20).q == 210);
}

TEST_CASE("xi = 20 equals the brute r3 sum over its points") {
    const auto c = character_mod(7);
    const auto R = RegionSpec::disc(1);
    u64 q = 0, pts = 0;
    for (i64 m = -20; m <= 20; ++m)
        for (i64 n = -20; n <= 20; ++n) {
            if (!R.contains(m, n, 20)) continue;
            ++pts;
            if (m == 0 && n == 0) continue;
            const i128 v = kF.eval(m, n);
            q += r3_brute(c, static_cast<u64>(v < 0 ? -v : v));
        }
    const auto e = q_empirical(kF, c, R, 20);
    CHECK(e.q == q);
    CHECK(e.points == pts);
}

TEST_CASE("traversal order, sign and monotonicity") {
    const auto c = character_mod(7);
    const BinaryCubicForm neg({-1, 0, 0, -2});
    for (const auto& R : {RegionSpec::disc(1), RegionSpec::ellipse(1.5L, 0.75L)}) {
        u64 prev = 0;
        for (long double xi : {5.0L, 12.5L, 31.0L, 64.0L}) {
            const auto r = q_empirical(kF, c, R, xi, ScanOrder::Rows);
            const auto col = q_empirical(kF, c, R, xi, ScanOrder::Columns);
            CHECK(r.q == col.q);
            CHECK(r.points == col.points);
            CHECK(q_empirical(neg, c, R, xi).q == r.q);
            CHECK(r.q >= prev);
            prev = r.q;
        }
    }
}

TEST_CASE("degenerate inputs") {
    const auto c = character_mod(7);
    const auto e = q_empirical(kF, c, RegionSpec::disc(1), 0.5L);
    CHECK(e.q == 0);
    CHECK(e.points == 1);
    CHECK_THROWS_AS(q_empirical(kF, c, RegionSpec::disc(1), 20000), Error);
    // X^3 - Y^3 vanishes on the diagonal.
    try {
        q_empirical(BinaryCubicForm({1, 0, 0, -1}), c, RegionSpec::disc(1), 3);
        FAIL("expected ZeroValueEncountered");
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::ZeroValueEncountered);
    }
}

TEST_CASE("main term scaling") {
    const auto R = RegionSpec::disc(1);
    const long double a = main_term(2.0L, 0.5L, R, 10), b = main_term(2.0L, 0.5L, R, 20);
    CHECK(std::fabs(b / a - 4) < 1e-15L);
    const auto R2 = RegionSpec::ellipse(2, 1);
    CHECK(std::fabs(main_term(2.0L, 0.5L, R2, 10) / a - 2) < 1e-15L);
}

TEST_CASE("convergence run") {
    const auto K = make_builtin_field(BuiltinField::Q7);
    const auto c = character_for_field(K);
    const auto rep = convergence_run(kF, c, K, RegionSpec::disc(1), {10, 20, 40}, {200, 1e-12L, 6});
    REQUIRE(rep.rows.size() == 3);
    CHECK(rep.rows[0].q == 142);
    CHECK(rep.rows[1].q == 668);
    for (const auto& r : rep.rows) {
        CHECK(r.ratio > 0);
        CHECK(std::isfinite(r.ratio));
        CHECK(std::fabs(r.ratio * r.main_term - static_cast<long double>(r.q)) < 1e-9L * r.q);
        CHECK(r.window_ok);
    }
    CHECK(rep.rows[0].stability.has_value());
    CHECK_FALSE(rep.rows[2].stability.has_value());
    CHECK(rep.theta > 0);
    const std::string csv = census_csv(rep);
    CHECK(csv.rfind("xi,points,Q,main_term,ratio,seconds\r\n", 0) == 0);
    CHECK_THROWS_AS(convergence_run(kF, c, K, RegionSpec::disc(1), {20, 10}), Error);
}

} // TEST_SUITE
