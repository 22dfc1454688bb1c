#include "doctest.h"

#include "cnc/errors.hpp"
#include "cnc/field.hpp"

#include <random>

using namespace cnc;

TEST_SUITE("field") {

TEST_CASE("builtin discriminants and conductors") {
    const auto k7 = make_builtin_field(BuiltinField::Q7);
    const auto k9 = make_builtin_field(BuiltinField::Q9);
    const auto k13 = make_builtin_field(BuiltinField::Q13);
    CHECK(k7.disc == 49);
    CHECK(k7.conductor_q == 7);
    CHECK(k9.disc == 81);
    CHECK(k9.conductor_q == 9);
    CHECK(k13.disc == 169);
    CHECK(k13.conductor_q == 13);
    for (const auto* K : {&k7, &k9, &k13}) {
        CHECK(K->warnings.empty());
        CHECK(K->power_basis);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) CHECK(K->basis_matrix[i][j] == Rat(i == j ? 1 : 0));
    }
}

TEST_CASE("norm form of q7 matches an independent expansion") {
    // det(y I + z M + t M^2) expanded by hand for X^3 + X^2 - 2X - 1:
    // t^3 + 6t^2 y - 2t^2 z + 5t y^2 - t y z - t z^2 + y^3 - y^2 z - 2 y z^2 + z^3
    const auto K = make_builtin_field(BuiltinField::Q7);
    const std::array<i64, 10> expect{1, -1, 5, -2, -1, 6, 1, -1, -2, 1};
    CHECK(K.norm_form.coeffs == expect);
}

TEST_CASE("norm form evaluation") {
    for (auto b : {BuiltinField::Q7, BuiltinField::Q9, BuiltinField::Q13}) {
        const auto K = make_builtin_field(b);
        CHECK(norm_form_eval(K, 1, 0, 0) == 1);
        CHECK(norm_form_eval(K, 2, 0, 0) == 8);
        CHECK(norm_form_eval(K, 0, 1, 0) == -K.coeffs[3]);
    }
    const auto K7 = make_builtin_field(BuiltinField::Q7);
    CHECK(norm_form_eval(K7, 0, 1, 0) == 1);
    CHECK(norm_form_eval_mod(K7, 3, -5, 7, 11) == static_cast<u64>(mod_floor(norm_form_eval(K7, 3, -5, 7), 11)));
    CHECK_THROWS_AS(norm_form_eval(K7, i64{1} << 41, 0, 0), Error);
}

TEST_CASE("discriminant two ways") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<i64> d(-50, 50);
    for (int i = 0; i < 500; ++i) {
        std::array<i64, 4> g{d(rng), d(rng), d(rng), d(rng)};
        if (g[0] == 0) g[0] = 1;
        CHECK(cubic_disc_closed(g) == cubic_disc_resultant(g));
    }
    CHECK(cubic_disc_closed({1, 0, 0, -2}) == -108);
}

TEST_CASE("make_field validation") {
    CHECK_THROWS_AS(make_field({1, 0, 0, -2}), Error);
    try {
        make_field({1, 0, 0, -2});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotCyclic);
    }
    try {
        make_field({1, 0, -1, 0});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NotIrreducible);
    }
    CHECK(make_field({1, 0, -3, -1}).conductor_q == 9);
    const auto K = make_field({1, 1, -2, -1});
    CHECK(K.norm_form.coeffs == make_builtin_field(BuiltinField::Q7).norm_form.coeffs);
    RatMatrix3 zero{};
    try {
        make_field({1, 1, -2, -1}, zero);
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::BadBasis);
    }
}

TEST_CASE("user basis changes the form but not the conductor") {
    RatMatrix3 B{};
    // w1 = 1, w2 = 1 + alpha, w3 = alpha + alpha^2: unimodular.
    B[0][0] = 1;
    B[0][1] = 1;
    B[1][1] = 1;
    B[1][2] = 1;
    B[2][2] = 1;
    const auto K = make_field({1, 1, -2, -1}, B);
    CHECK(K.conductor_q == 7);
    CHECK(!K.warnings.empty());
    const auto P = make_builtin_field(BuiltinField::Q7);
    // P_B(y,z,t) = P(y + z, z + t, t).
    for (i64 y = -3; y <= 3; ++y)
        for (i64 z = -3; z <= 3; ++z)
            for (i64 t = -3; t <= 3; ++t) CHECK(norm_form_eval(K, y, z, t) == norm_form_eval(P, y + z, z + t, t));
}

TEST_CASE("norm is multiplicative and homogeneous") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<i64> d(-60, 60);
    for (auto b : {BuiltinField::Q7, BuiltinField::Q9, BuiltinField::Q13}) {
        const auto K = make_builtin_field(b);
        for (int i = 0; i < 1000; ++i) {
            const std::array<i64, 3> u{d(rng), d(rng), d(rng)}, v{d(rng), d(rng), d(rng)};
            const auto w = field_mul(K, u, v);
            REQUIRE(norm_form_eval(K, w[0], w[1], w[2]) ==
                    norm_form_eval(K, u[0], u[1], u[2]) * norm_form_eval(K, v[0], v[1], v[2]));
            const i64 lam = d(rng);
            REQUIRE(norm_form_eval(K, lam * u[0], lam * u[1], lam * u[2]) ==
                    static_cast<i128>(lam) * lam * lam * norm_form_eval(K, u[0], u[1], u[2]));
        }
    }
}

}
