#include "doctest.h"

#include "cnc/character.hpp"
#include "cnc/errors.hpp"

#include <numeric>

using namespace cnc;

TEST_SUITE("character") {

TEST_CASE("eisenstein arithmetic") {
    const EisensteinInt w{0, 1};
    CHECK(w * w == EisensteinInt{-1, -1});
    CHECK(w * w * w == EisensteinInt{1, 0});
    CHECK(EisensteinInt{1, 0} + w + w * w == EisensteinInt{0, 0});
    CHECK(EisensteinInt{3, 5}.norm_sq() == 9 - 15 + 25);
    CHECK(w.conj() == w * w);
    const EisensteinInt z{4, -7};
    CHECK((z * z.conj()).is_real());
    CHECK((z * z.conj()).a == z.norm_sq());
}

TEST_CASE("builtin kernels and canonical generator") {
    const auto K7 = make_builtin_field(BuiltinField::Q7);
    const auto c7 = character_for_field(K7);
    CHECK(c7.kernel() == std::vector<u64>{1, 6});
    CHECK(c7.value(3) == EisensteinInt{0, 1});
    CHECK(c7.value(6) == EisensteinInt{1, 0});
    CHECK(c7.value(7).is_zero());
    CHECK(c7.value(1) == EisensteinInt{1, 0});
    CHECK(c7.value(13) == EisensteinInt{1, 0});
    CHECK(chi_pow(c7, 3, 2) == EisensteinInt{-1, -1});

    const auto c9 = character_for_field(make_builtin_field(BuiltinField::Q9));
    CHECK(c9.kernel() == std::vector<u64>{1, 8});
    CHECK(c9.value(2) == EisensteinInt{0, 1});
    const auto c13 = character_for_field(make_builtin_field(BuiltinField::Q13));
    CHECK(c13.kernel() == std::vector<u64>{1, 5, 8, 12});
    CHECK(c13.value(2) == EisensteinInt{0, 1});
}

TEST_CASE("character axioms for every modulus up to 100") {
    for (u64 q = 2; q <= 100; ++q) {
        std::vector<CubicCharacter> cs;
        try {
            cs = primitive_cubic_characters(q);
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::NoCubicCharacter);
            continue;
        }
        for (const auto& c : cs) {
            u64 units = 0;
            EisensteinInt total{0, 0};
            for (u64 m = 0; m < q; ++m) {
                total += c.value(static_cast<i64>(m));
                const bool unit = std::gcd(m, q) == 1;
                CHECK(c.value(static_cast<i64>(m)).is_zero() == !unit);
                if (!unit) continue;
                ++units;
                const auto one = EisensteinInt{1, 0} + c.value(static_cast<i64>(m)) + c.value(static_cast<i64>(m), 2);
                CHECK((one == EisensteinInt{0, 0} || one == EisensteinInt{3, 0}));
                CHECK((one == EisensteinInt{3, 0}) == c.in_kernel(static_cast<i64>(m)));
                for (u64 n = 0; n < q; ++n)
                    if (std::gcd(n, q) == 1)
                        REQUIRE(c.value(static_cast<i64>(m * n % q)) == c.value(static_cast<i64>(m)) * c.value(static_cast<i64>(n)));
            }
            CHECK(total == EisensteinInt{0, 0});
            CHECK(c.kernel().size() * 3 == units);
            CHECK(c.value(static_cast<i64>(q - 1)) == EisensteinInt{1, 0});
            const auto c2 = c.squared();
            for (u64 m = 0; m < q; ++m) CHECK(c2.value(static_cast<i64>(m)) == c.value(static_cast<i64>(m), 2));
        }
    }
}

TEST_CASE("composite conductor picks the character matching the field") {
    // Conductor 63 on the power basis; conductor 91 needs the basis (1, a, (2a + a^2)/3).
    RatMatrix3 B{};
    B[0][0] = 1;
    B[1][1] = 1;
    B[1][2] = Rat(2, 3);
    B[2][2] = Rat(1, 3);
    for (const std::array<i64, 4> g : {std::array<i64, 4>{1, -1, -30, -27}, std::array<i64, 4>{1, 0, -21, -35}}) {
        const auto K = g[3] == -27 ? make_field(g, B) : make_field(g);
        const u64 q = static_cast<u64>(K.conductor_q);
        CHECK((q == 91 || q == 63));
        CHECK(primitive_cubic_characters(q).size() == 2);
        CHECK(norm_form_eval(K, 1, 0, 0) == 1);
        const auto c = character_for_field(K);
        for (u64 p : primes_up_to(3000)) {
            if (static_cast<u64>(K.disc) % p == 0) continue;
            int roots = 0;
            for (u64 x = 0; x < p; ++x) {
                const i128 X = x;
                if (mod_floor(X * X * X + g[1] * X * X + g[2] * X + g[3], p) == 0) ++roots;
            }
            CHECK((roots == 3) == c.in_kernel(static_cast<i64>(p)));
        }
    }
}

TEST_CASE("non-maximal order with inconsistent conductor is rejected") {
    // Power order of index 7 in the conductor-13 field: discriminant 91^2, but no
    // conductor-91 character matches its splitting.
    const auto K = make_field({1, -1, -16, -13});
    CHECK(K.conductor_q == 91);
    CHECK_THROWS_AS(character_for_field(K), Error);
}

TEST_CASE("epsilon sets") {
    const auto c7 = character_mod(7);
    CHECK(epsilon_member(c7, 7, 1));
    CHECK(epsilon_member(c7, 7, 6));
    CHECK(epsilon_member(c7, 7, 0));
    CHECK(!epsilon_member(c7, 7, 3));
    CHECK_THROWS_AS(EpsilonSet(c7, 14), Error);

    // Direct search oracle: d1 = 7^j up to 7^4, alpha in G1.
    for (u64 d : {7ULL, 49ULL, 343ULL}) {
        const EpsilonSet E(c7, d);
        for (u64 n = 0; n < d; ++n) {
            bool found = false;
            u64 d1 = 1;
            for (int j = 0; j <= 4 && !found; ++j, d1 *= 7) {
                const u64 m = std::gcd(d1 * 7, d);
                for (u64 a : c7.kernel())
                    if ((a * d1) % m == n % m) found = true;
            }
            CHECK(E.contains(n) == found);
        }
    }

    // Closure under G1 and compatibility with projection.
    for (u64 q : {7ULL, 9ULL, 13ULL, 63ULL}) {
        const auto c = character_mod(q);
        u64 d = q;
        for (int k = 1; k <= (q > 13 ? 2 : 3); ++k, d *= q) {
            const EpsilonSet E(c, d), Elow(c, d / q == 0 ? 1 : d / q);
            for (u64 n = 0; n < d; ++n) {
                if (!E.contains(n)) continue;
                for (u64 a : c.kernel()) {
                    // lift alpha to a unit mod d
                    u64 lift = a;
                    while (std::gcd(lift, d) != 1) lift += q;
                    CHECK(E.contains(static_cast<u64>(static_cast<u128>(lift) * n % d)));
                }
                if (k > 1) CHECK(Elow.contains(n % (d / q)));
            }
            // exponent cap 3 v versus 4 v gives the same set
            const EpsilonSet E4(c, d, 4);
            for (u64 n = 0; n < d; ++n) REQUIRE(E.contains(n) == E4.contains(n));
        }
    }
}

TEST_CASE("L(1,chi) L(1,chi^2)") {
    // Frozen from an independent digamma evaluation L = -(1/q) sum chi(a) psi(a/q) at 30 digits.
    struct Row {
        BuiltinField f;
        double re, im, prod;
    };
    for (const Row& r : {Row{BuiltinField::Q7, 0.537747380504904, -0.105297545630796, 0.300259818355756},
                         Row{BuiltinField::Q9, 0.589489817376261, 0.173097788506347, 0.377461089176086},
                         Row{BuiltinField::Q13, 0.566329916542752, 0.315096444765526, 0.420015343875195}}) {
        const auto c = character_for_field(make_builtin_field(r.f));
        const auto rep = l_value_product(c, 1e-8L);
        CHECK(rep.product > 0);
        CHECK(static_cast<double>(rep.l1_closed.real()) == doctest::Approx(r.re).epsilon(1e-12));
        CHECK(static_cast<double>(rep.l1_closed.imag()) == doctest::Approx(r.im).epsilon(1e-12));
        CHECK(static_cast<double>(rep.product) == doctest::Approx(r.prod).epsilon(1e-12));
        CHECK(rep.discrepancy < 1e-8L);
    }
}

}
