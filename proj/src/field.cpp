#include "cnc/field.hpp"

#include "cnc/errors.hpp"

#include <cstdlib>
#include <utility>

namespace cnc {

namespace {

using Linear = std::array<Rat, 3>;
using Cubic = std::array<Rat, 10>;

int monomial_index(int i, int j, int k) {
    for (int m = 0; m < 10; ++m)
        if (kNormMonomials[m][0] == i && kNormMonomials[m][1] == j && kNormMonomials[m][2] == k) return m;
    return -1;
}

void add_triple_product(Cubic& acc, const Linear& a, const Linear& b, const Linear& c, int sign) {
    for (int x = 0; x < 3; ++x)
        for (int y = 0; y < 3; ++y)
            for (int z = 0; z < 3; ++z) {
                Rat v = a[x] * b[y] * c[z];
                if (v.numerator() == 0) continue;
                int e[3] = {0, 0, 0};
                ++e[x];
                ++e[y];
                ++e[z];
                acc[monomial_index(e[0], e[1], e[2])] += sign * v;
            }
}

using IntMatrix3 = std::array<std::array<i64, 3>, 3>;

IntMatrix3 companion(const std::array<i64, 4>& g) {
    // Columns: alpha*1, alpha*alpha, alpha*alpha^2 in the power basis.
    IntMatrix3 m{};
    m[1][0] = 1;
    m[2][1] = 1;
    m[0][2] = -g[3];
    m[1][2] = -g[2];
    m[2][2] = -g[1];
    return m;
}

IntMatrix3 matmul(const IntMatrix3& a, const IntMatrix3& b) {
    IntMatrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            for (int k = 0; k < 3; ++k) r[i][j] += a[i][k] * b[k][j];
    return r;
}

Rat det3(const RatMatrix3& m) {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

RatMatrix3 inverse3(const RatMatrix3& m) {
    Rat d = det3(m);
    RatMatrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
            int i1 = (j + 1) % 3, i2 = (j + 2) % 3, j1 = (i + 1) % 3, j2 = (i + 2) % 3;
            r[i][j] = (m[i1][j1] * m[i2][j2] - m[i1][j2] * m[i2][j1]) / d;
        }
    return r;
}

RatMatrix3 identity3() {
    RatMatrix3 r{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r[i][j] = (i == j) ? 1 : 0;
    return r;
}

NormForm expand_norm_form(const std::array<i64, 4>& g, const RatMatrix3& basis) {
    IntMatrix3 id{};
    for (int i = 0; i < 3; ++i) id[i][i] = 1;
    const IntMatrix3 m1 = companion(g);
    const IntMatrix3 m2 = matmul(m1, m1);
    const IntMatrix3* powers[3] = {&id, &m1, &m2};

    // T[r][c] = sum_j v_j * (M^j)[r][c] with v = basis * (y,z,t).
    std::array<std::array<Linear, 3>, 3> T{};
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c)
            for (int var = 0; var < 3; ++var) {
                Rat s = 0;
                for (int j = 0; j < 3; ++j) s += basis[j][var] * (*powers[j])[r][c];
                T[r][c][var] = s;
            }

    Cubic acc{};
    static constexpr int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {0, 2, 1}, {2, 1, 0}, {1, 0, 2}};
    for (int p = 0; p < 6; ++p)
        add_triple_product(acc, T[0][perms[p][0]], T[1][perms[p][1]], T[2][perms[p][2]], p < 3 ? 1 : -1);

    NormForm nf;
    for (int m = 0; m < 10; ++m) {
        if (acc[m].denominator() != 1) throw Error(ErrorKind::BadBasis, "norm form has non-integral coefficients");
        nf.coeffs[m] = acc[m].numerator();
    }
    return nf;
}

bool valid_cyclic_conductor(i64 q) {
    if (q <= 1) return false;
    if (q % 9 == 0) q /= 9;
    if (q % 3 == 0) return false;
    for (const auto& [p, k] : factor(static_cast<u64>(q)))
        if (k != 1 || p % 3 != 1) return false;
    return true;
}

} // namespace

i128 cubic_disc_closed(const std::array<i64, 4>& g) {
    const i128 a = g[0], b = g[1], c = g[2], d = g[3];
    return 18 * a * b * c * d - 4 * b * b * b * d + b * b * c * c - 4 * a * c * c * c - 27 * a * a * d * d;
}

i128 cubic_disc_resultant(const std::array<i64, 4>& g) {
    // Sylvester matrix of g (degree 3) and g' (degree 2); Bareiss elimination.
    const i128 d0 = 3 * static_cast<i128>(g[0]), d1 = 2 * static_cast<i128>(g[1]), d2 = g[2];
    i128 s[5][5] = {
        {g[0], g[1], g[2], g[3], 0},
        {0, g[0], g[1], g[2], g[3]},
        {d0, d1, d2, 0, 0},
        {0, d0, d1, d2, 0},
        {0, 0, d0, d1, d2},
    };
    int sign = 1;
    i128 prev = 1;
    for (int k = 0; k < 4; ++k) {
        if (s[k][k] == 0) {
            int piv = -1;
            for (int r = k + 1; r < 5; ++r)
                if (s[r][k] != 0) {
                    piv = r;
                    break;
                }
            if (piv < 0) return 0;
            for (int c = 0; c < 5; ++c) std::swap(s[k][c], s[piv][c]);
            sign = -sign;
        }
        for (int i = k + 1; i < 5; ++i)
            for (int j = k + 1; j < 5; ++j) s[i][j] = (s[i][j] * s[k][k] - s[i][k] * s[k][j]) / prev;
        prev = s[k][k];
    }
    const i128 res = sign * s[4][4];
    return -res / g[0];
}

bool cubic_irreducible_over_q(const std::array<i64, 4>& g) {
    const i64 a = g[0], d = g[3];
    if (a == 0) return false;
    if (d == 0) return false;
    // Rational roots r/s have r | d and s | a.
    const u64 ad = static_cast<u64>(std::llabs(d)), aa = static_cast<u64>(std::llabs(a));
    for (u64 r : divisors(factor(ad)))
        for (u64 s : divisors(factor(aa)))
            for (int sg : {1, -1}) {
                const i128 R = sg * static_cast<i128>(r), S = s;
                if (g[0] * R * R * R + g[1] * R * R * S + g[2] * R * S * S + g[3] * S * S * S == 0) return false;
            }
    return true;
}

CubicField make_field(const std::array<i64, 4>& g, const std::optional<RatMatrix3>& basis) {
    if (g[0] != 1) throw Error(ErrorKind::Validation, "defining polynomial must be monic");
    if (!cubic_irreducible_over_q(g)) throw Error(ErrorKind::NotIrreducible, "cubic has a rational root");
    const i128 disc = cubic_disc_closed(g);
    if (disc <= 0 || !is_square(disc)) throw Error(ErrorKind::NotCyclic, "discriminant is not a nonzero square");

    CubicField K;
    K.coeffs = g;
    K.disc = static_cast<i64>(disc);
    K.power_basis = !basis.has_value();
    K.basis_matrix = basis.value_or(identity3());
    const Rat det = det3(K.basis_matrix);
    if (det.numerator() == 0) throw Error(ErrorKind::BadBasis, "basis determinant is zero");
    // disc of the basis order = det(B)^2 * disc(g).
    const Rat order_disc = det * det * static_cast<i64>(disc);
    if (order_disc.denominator() != 1 || !is_square(order_disc.numerator()))
        throw Error(ErrorKind::BadBasis, "basis order discriminant is not a square integer");
    K.conductor_q = static_cast<i64>(isqrt(static_cast<u64>(order_disc.numerator())));
    K.norm_form = expand_norm_form(g, K.basis_matrix);
    if (basis.has_value()) K.warnings.push_back("user basis: maximality of the order is not verified");
    if (!valid_cyclic_conductor(K.conductor_q))
        K.warnings.push_back("conductor is not a cyclic cubic conductor; the order may be non-maximal");
    return K;
}

CubicField make_builtin_field(BuiltinField name) {
    switch (name) {
    case BuiltinField::Q7: return make_field({1, 1, -2, -1});
    case BuiltinField::Q9: return make_field({1, 0, -3, -1});
    case BuiltinField::Q13: return make_field({1, -1, -4, -1});
    }
    throw Error(ErrorKind::Validation, "unknown builtin field");
}

std::optional<BuiltinField> parse_builtin(const std::string& name) {
    if (name == "q7") return BuiltinField::Q7;
    if (name == "q9") return BuiltinField::Q9;
    if (name == "q13") return BuiltinField::Q13;
    return std::nullopt;
}

std::string builtin_name(BuiltinField name) {
    switch (name) {
    case BuiltinField::Q7: return "q7";
    case BuiltinField::Q9: return "q9";
    case BuiltinField::Q13: return "q13";
    }
    return "?";
}

i128 norm_form_eval(const CubicField& K, i64 y, i64 z, i64 t) {
    constexpr i64 lim = i64{1} << 40;
    if (std::llabs(y) > lim || std::llabs(z) > lim || std::llabs(t) > lim)
        throw Error(ErrorKind::Overflow, "norm form arguments exceed 2^40");
    const i128 v[3] = {y, z, t};
    i128 s = 0;
    for (int m = 0; m < 10; ++m) {
        i128 term = K.norm_form.coeffs[m];
        for (int var = 0; var < 3; ++var)
            for (int e = 0; e < kNormMonomials[m][var]; ++e) term *= v[var];
        s += term;
    }
    return s;
}

u64 norm_form_eval_mod(const CubicField& K, i64 y, i64 z, i64 t, u64 modulus) {
    if (modulus == 0 || modulus > (u64{1} << 62)) throw Error(ErrorKind::Overflow, "modulus out of range");
    const u64 v[3] = {mod_floor(y, modulus), mod_floor(z, modulus), mod_floor(t, modulus)};
    u64 s = 0;
    for (int m = 0; m < 10; ++m) {
        u64 term = mod_floor(K.norm_form.coeffs[m], modulus);
        for (int var = 0; var < 3; ++var)
            for (int e = 0; e < kNormMonomials[m][var]; ++e) term = mulmod(term, v[var], modulus);
        s = (s + term) % modulus;
    }
    return s;
}

std::array<i64, 3> field_mul(const CubicField& K, const std::array<i64, 3>& u, const std::array<i64, 3>& v) {
    auto to_power = [&](const std::array<i64, 3>& w) {
        std::array<Rat, 3> r{};
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r[i] += K.basis_matrix[i][j] * w[j];
        return r;
    };
    const auto pu = to_power(u), pv = to_power(v);
    std::array<Rat, 5> prod{};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) prod[i + j] += pu[i] * pv[j];
    // Reduce with alpha^3 = -a alpha^2 - b alpha - c.
    for (int d = 4; d >= 3; --d) {
        const Rat lead = prod[d];
        prod[d] = 0;
        prod[d - 1] -= lead * K.coeffs[1];
        prod[d - 2] -= lead * K.coeffs[2];
        prod[d - 3] -= lead * K.coeffs[3];
    }
    const RatMatrix3 inv = inverse3(K.basis_matrix);
    std::array<i64, 3> out{};
    for (int i = 0; i < 3; ++i) {
        Rat s = 0;
        for (int j = 0; j < 3; ++j) s += inv[i][j] * prod[j];
        if (s.denominator() != 1) throw Error(ErrorKind::BadBasis, "basis is not closed under multiplication");
        out[i] = s.numerator();
    }
    return out;
}

} // namespace cnc
