#include "cnc/congruence.hpp"

#include "cnc/errors.hpp"

#include <cstdlib>
#include <numeric>
#include <sstream>

namespace cnc {

BinaryCubicForm::BinaryCubicForm(const std::array<i64, 4>& coeffs) : a(coeffs) {
    const i128 d = cubic_disc_closed(coeffs);
    if (d > static_cast<i128>(INT64_MAX) || d < static_cast<i128>(INT64_MIN))
        throw Error(ErrorKind::Overflow, "form discriminant exceeds 64 bits");
    disc = static_cast<i64>(d);
    height = 0;
    for (i64 c : a) height = std::max<i64>(height, std::llabs(c));
}

u64 BinaryCubicForm::eval_mod(i64 x, i64 y, u64 m) const {
    const u64 X = mod_floor(x, m), Y = mod_floor(y, m);
    const u64 X2 = mulmod(X, X, m), Y2 = mulmod(Y, Y, m);
    u64 s = mulmod(mod_floor(a[0], m), mulmod(X2, X, m), m);
    s = (s + mulmod(mod_floor(a[1], m), mulmod(X2, Y, m), m)) % m;
    s = (s + mulmod(mod_floor(a[2], m), mulmod(X, Y2, m), m)) % m;
    s = (s + mulmod(mod_floor(a[3], m), mulmod(Y2, Y, m), m)) % m;
    return s;
}

std::string BinaryCubicForm::str() const {
    std::ostringstream os;
    os << a[0] << "," << a[1] << "," << a[2] << "," << a[3];
    return os.str();
}

BinaryCubicForm parse_form(const std::string& s) {
    std::vector<i64> v;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t pos = 0;
            v.push_back(std::stoll(tok, &pos));
            if (pos != tok.size()) throw Error(ErrorKind::Validation, "bad coefficient '" + tok + "'");
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::Validation, "bad coefficient '" + tok + "'");
        }
    }
    if (v.size() != 4) throw Error(ErrorKind::Validation, "a binary cubic form needs exactly 4 coefficients");
    return BinaryCubicForm({v[0], v[1], v[2], v[3]});
}

CubicStepper::CubicStepper(const std::array<i64, 4>& f, u64 s) : s_(s) {
    auto ev = [&](i128 x) {
        const i128 r = f[0] + f[1] * x + f[2] * x * x + f[3] * x * x * x;
        return mod_floor(r, s);
    };
    const u64 f0 = ev(0), f1 = ev(1), f2 = ev(2), f3 = ev(3);
    auto sub = [&](u64 x, u64 y) { return x >= y ? x - y : x + s - y; };
    v_ = f0;
    d1_ = sub(f1, f0);
    d2_ = (sub(f2, mulmod(2, f1, s)) + f0) % s;
    d3_ = sub((f3 + mulmod(3, f1, s)) % s, (mulmod(3, f2, s) + f0) % s);
}

namespace {

// Polynomials over F_p, low-order coefficients first, degree <= 5.
using PolyP = std::vector<u64>;

void trim(PolyP& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

PolyP poly_mod(PolyP a, const PolyP& m, u64 p) {
    trim(a);
    const u64 inv = powmod(m.back(), p - 2, p);
    while (a.size() >= m.size()) {
        const u64 c = mulmod(a.back(), inv, p);
        const std::size_t shift = a.size() - m.size();
        for (std::size_t i = 0; i < m.size(); ++i) a[shift + i] = (a[shift + i] + p - mulmod(c, m[i], p)) % p;
        trim(a);
    }
    return a;
}

PolyP poly_mulmod(const PolyP& a, const PolyP& b, const PolyP& m, u64 p) {
    if (a.empty() || b.empty()) return {};
    PolyP r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + mulmod(a[i], b[j], p)) % p;
    return poly_mod(r, m, p);
}

std::size_t poly_gcd_degree(PolyP a, PolyP b, u64 p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        PolyP r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a.empty() ? 0 : a.size() - 1;
}

u64 eval_mod(const std::array<i64, 4>& f, u64 x, u64 m) {
    u64 r = mod_floor(f[3], m);
    for (int i = 2; i >= 0; --i) r = (mulmod(r, x, m) + mod_floor(f[i], m)) % m;
    return r;
}

// Distinct roots modulo a prime p of a polynomial with no repeated roots mod p.
u64 distinct_roots_mod_p(const std::array<i64, 4>& f, u64 p) {
    if (p <= (u64{1} << 20)) {
        u64 n = 0;
        for (u64 x = 0; x < p; ++x)
            if (eval_mod(f, x, p) == 0) ++n;
        return n;
    }
    PolyP g(4);
    for (int i = 0; i < 4; ++i) g[i] = mod_floor(f[i], p);
    trim(g);
    if (g.size() <= 1) return 0;
    // x^p mod g by repeated squaring, then deg gcd(g, x^p - x).
    PolyP result{1}, base = poly_mod({0, 1}, g, p);
    for (u64 e = p; e; e >>= 1) {
        if (e & 1) result = poly_mulmod(result, base, g, p);
        base = poly_mulmod(base, base, g, p);
    }
    result.resize(std::max<std::size_t>(result.size(), 2), 0);
    result[1] = (result[1] + p - 1) % p;
    return poly_gcd_degree(g, result, p);
}

} // namespace

u64 count_roots_prime_power(const std::array<i64, 4>& f, i64 disc_hint, u64 p, int k, u64 only_class) {
    if (k == 0) return 1;
    const bool restricted = only_class != ~u64{0};
    if (disc_hint != 0 && static_cast<u64>(std::llabs(disc_hint)) % p != 0) {
        // Every root mod p is simple and lifts uniquely to each p^k.
        if (restricted) return eval_mod(f, only_class % p, p) == 0 ? 1 : 0;
        return distinct_roots_mod_p(f, p);
    }
    if (p > 10'000'000) throw Error(ErrorKind::CapExceeded, "root enumeration modulo a large ramified prime");
    const u64 m = ipow_checked(p, k);
    if (m > (u64{1} << 62)) throw Error(ErrorKind::Overflow, "modulus exceeds 2^62");
    std::vector<u64> pw(k + 1, 1);
    for (int i = 1; i <= k; ++i) pw[i] = pw[i - 1] * p;

    const u64 c1 = mod_floor(f[1], m), c2 = mod_floor(f[2], m), c3 = mod_floor(f[3], m);
    struct Node {
        u64 r;
        int j;
    };
    std::vector<Node> stack;
    u64 work = 0;
    for (u64 r = 0; r < p; ++r) {
        if (restricted && r != only_class % p) continue;
        if (eval_mod(f, r, p) == 0) stack.push_back({r, 1});
    }
    u64 count = 0;
    while (!stack.empty()) {
        const Node nd = stack.back();
        stack.pop_back();
        if (++work > kLiftWorkCap) throw Error(ErrorKind::CapExceeded, "tree lifting exceeded the work cap");
        if (nd.j == k) {
            ++count;
            continue;
        }
        const u64 r = nd.r;
        // Taylor coefficients of f(r + p^j T).
        const u64 r2 = mulmod(r, r, m);
        const u64 t0 = eval_mod(f, r, m);
        const u64 t1 = (c1 + mulmod(2, mulmod(c2, r, m), m) + mulmod(3, mulmod(c3, r2, m), m)) % m;
        const u64 t2 = (c2 + mulmod(3, mulmod(c3, r, m), m)) % m;
        const u64 t3 = c3;
        auto scaled_zero = [&](u64 t, int e) { return e >= k || mulmod(t, pw[e], m) == 0; };
        if (t0 == 0 && scaled_zero(t1, nd.j) && scaled_zero(t2, 2 * nd.j) && scaled_zero(t3, 3 * nd.j)) {
            count += pw[k - nd.j];
            continue;
        }
        if (t1 % p != 0) {
            ++count;
            continue;
        }
        const u64 next_mod = pw[nd.j + 1];
        for (u64 t = 0; t < p; ++t) {
            const u64 rr = r + t * pw[nd.j];
            if (eval_mod(f, rr, next_mod) == 0) stack.push_back({rr, nd.j + 1});
        }
    }
    return count;
}

LocalRootCounts local_root_counts(const BinaryCubicForm& F, u64 p, int k) {
    LocalRootCounts rc;
    rc.minus = count_roots_prime_power({F.a[3], F.a[2], F.a[1], F.a[0]}, F.disc, p, k);
    rc.zero = count_roots_prime_power({F.a[0], F.a[1], F.a[2], F.a[3]}, F.disc, p, k, 0);
    return rc;
}

u64 rho_plus_prime_power(const BinaryCubicForm& F, u64 p, int k) {
    if (k == 0) return 1;
    const u64 pk = ipow_checked(p, k);
    if (pk > (u64{1} << 31)) throw Error(ErrorKind::Overflow, "rho+ modulus exceeds 2^31");
    const u64 star = rho_star_prime_power(F, p, k);
    if (k <= 3) return star + ipow_checked(p, 2 * (k - 1));
    return star + ipow_checked(p, 4) * rho_plus_prime_power(F, p, k - 3);
}

u64 rho_star_prime_power(const BinaryCubicForm& F, u64 p, int k) {
    if (k == 0) return 1;
    const u64 pk = ipow_checked(p, k);
    const LocalRootCounts rc = local_root_counts(F, p, k);
    return (pk - pk / p) * (rc.minus + rc.zero);
}

long double rho_plus_density(const BinaryCubicForm& F, u64 p, int k) {
    if (k == 0) return 1;
    const LocalRootCounts rc = local_root_counts(F, p, k);
    const long double P = static_cast<long double>(p);
    const long double head = (1 - 1 / P) * std::pow(P, -k) * static_cast<long double>(rc.minus + rc.zero);
    const long double rest = k <= 3 ? 1.0L : rho_plus_density(F, p, k - 3);
    return head + rest / (P * P);
}

u64 rho_minus(const BinaryCubicForm& F, u64 s) {
    if (s == 0) throw Error(ErrorKind::Validation, "modulus must be positive");
    u64 r = 1;
    for (const auto& [p, k] : factor(s)) r *= count_roots_prime_power({F.a[3], F.a[2], F.a[1], F.a[0]}, F.disc, p, k);
    return r;
}

u64 rho_plus(const BinaryCubicForm& F, u64 s) {
    if (s == 0) throw Error(ErrorKind::Validation, "modulus must be positive");
    u64 r = 1;
    for (const auto& [p, k] : factor(s)) r *= rho_plus_prime_power(F, p, k);
    return r;
}

u64 rho_star(const BinaryCubicForm& F, u64 s) {
    if (s == 0) throw Error(ErrorKind::Validation, "modulus must be positive");
    if (s > (u64{1} << 31)) throw Error(ErrorKind::Overflow, "rho* modulus exceeds 2^31");
    u64 r = 1;
    for (const auto& [p, k] : factor(s)) r *= rho_star_prime_power(F, p, k);
    return r;
}

namespace {

// F(a, b) as a polynomial in a, coefficients reduced mod s.
std::array<i64, 4> row_poly(const BinaryCubicForm& F, u64 b, u64 s) {
    const u64 b2 = mulmod(b, b, s), b3 = mulmod(b2, b, s);
    return {static_cast<i64>(mulmod(mod_floor(F.a[3], s), b3, s)), static_cast<i64>(mulmod(mod_floor(F.a[2], s), b2, s)),
            static_cast<i64>(mulmod(mod_floor(F.a[1], s), b, s)), static_cast<i64>(mod_floor(F.a[0], s))};
}

void check_brute_scale(u64 s) {
    if (s == 0 || s > 65536) throw Error(ErrorKind::OracleScale, "brute rho requires 1 <= s <= 65536");
}

} // namespace

u64 rho_minus_brute(const BinaryCubicForm& F, u64 s) {
    check_brute_scale(s);
    CubicStepper st(row_poly(F, 1 % s, s), s);
    u64 n = 0;
    for (u64 a = 0; a < s; ++a, st.step())
        if (st.value() == 0) ++n;
    return n;
}

u64 rho_plus_brute(const BinaryCubicForm& F, u64 s) {
    check_brute_scale(s);
    u64 n = 0;
    for (u64 b = 0; b < s; ++b) {
        CubicStepper st(row_poly(F, b, s), s);
        for (u64 a = 0; a < s; ++a, st.step())
            if (st.value() == 0) ++n;
    }
    return n;
}

u64 rho_star_brute(const BinaryCubicForm& F, u64 s) {
    check_brute_scale(s);
    u64 n = 0;
    for (u64 b = 0; b < s; ++b) {
        const u64 gb = std::gcd(b, s);
        CubicStepper st(row_poly(F, b, s), s);
        for (u64 a = 0; a < s; ++a, st.step())
            if (st.value() == 0 && std::gcd(a, gb) == 1) ++n;
    }
    return n;
}

u64 lambda_count(const BinaryCubicForm& F, u64 s, const RegionSpec& R, long double xi, std::optional<u64> coprime_q) {
    if (s == 0) throw Error(ErrorKind::Validation, "modulus must be positive");
    u64 n_pts = 0;
    const i64 M = R.m_extent(xi);
    for (i64 m = -M; m <= M; ++m) {
        i64 nmax;
        if (!R.row(m, xi, nmax)) continue;
        if (coprime_q && std::gcd(static_cast<u64>(std::llabs(m)), *coprime_q) != 1) continue;
        for (i64 n = -nmax; n <= nmax; ++n)
            if (mod_floor(F.eval(m, n), s) == 0) ++n_pts;
    }
    return n_pts;
}

u64 s_count_closed(const CubicField& K, const CubicCharacter& c, u64 p, int k, int vA) {
    if (static_cast<u64>(K.conductor_q) % p == 0) throw Error(ErrorKind::RamifiedPrime, "closed form needs p not dividing q");
    if (k < 1 || vA < 0) throw Error(ErrorKind::Validation, "need k >= 1 and vA >= 0");
    const u64 base = ipow_checked(p, 2 * k - 2);
    const bool split = c.exponent(static_cast<i64>(p)) == 0;
    if (!split) {
        if (vA < k) return vA % 3 == 0 ? base * (p * p + p + 1) : 0;
        return ipow_checked(p, 3 * ((2 * k) / 3));
    }
    if (vA < k) {
        const u64 binom = static_cast<u64>(vA + 1) * static_cast<u64>(vA + 2) / 2;
        return base * (p - 1) * (p - 1) * binom;
    }
    const u64 kk = static_cast<u64>(k);
    return base * (kk * (kk + 1) / 2 * (p - 1) * (p - 1) + kk * p * (p - 1) + p * p);
}

std::vector<u64> s_count_histogram(const CubicField& K, u64 p, int k) {
    const u64 m = ipow_checked(p, k);
    if (static_cast<u128>(m) * m * m > 100'000'000) throw Error(ErrorKind::OracleScale, "S-count enumeration needs p^{3k} <= 1e8");
    const auto& c = K.norm_form.coeffs;
    std::vector<u64> h(m, 0);
    for (u64 y = 0; y < m; ++y)
        for (u64 z = 0; z < m; ++z) {
            const i128 Y = y, Z = z;
            const i128 k0 = c[0] * Y * Y * Y + c[1] * Y * Y * Z + c[3] * Y * Z * Z + c[6] * Z * Z * Z;
            const i128 k1 = c[2] * Y * Y + c[4] * Y * Z + c[7] * Z * Z;
            const i128 k2 = c[5] * Y + c[8] * Z;
            CubicStepper st({static_cast<i64>(mod_floor(k0, m)), static_cast<i64>(mod_floor(k1, m)),
                             static_cast<i64>(mod_floor(k2, m)), static_cast<i64>(mod_floor(c[9], m))},
                            m);
            for (u64 t = 0; t < m; ++t, st.step()) ++h[st.value()];
        }
    return h;
}

u64 s_count_brute(const CubicField& K, u64 p, int k, u64 A) {
    const auto h = s_count_histogram(K, p, k);
    return h[A % h.size()];
}

IrreducibilityReport check_irreducible_over_field(const BinaryCubicForm& F, const CubicField& K) {
    IrreducibilityReport rep;
    if (F.disc == 0) {
        rep.reason = "zero discriminant";
        return rep;
    }
    if (F.a[0] == 0 || F.a[3] == 0 || !cubic_irreducible_over_q(F.a)) {
        rep.reason = "F has a rational linear factor";
        return rep;
    }
    rep.over_q = true;
    rep.disc_square = is_square(F.disc);
    if (!rep.disc_square) {
        rep.over_k = true;
        rep.reason = "disc(F) is not a square, so the splitting field of F is not cyclic";
        return rep;
    }
    // Cyclic splitting field: F factors over K iff that field is K, i.e. the same primes split.
    const i128 bad = static_cast<i128>(F.disc) * F.a[0] * K.conductor_q * K.disc * 6;
    for (u64 p : primes_up_to(5000)) {
        if (bad % static_cast<i128>(p) == 0) continue;
        const u64 rf = distinct_roots_mod_p({F.a[3], F.a[2], F.a[1], F.a[0]}, p);
        const u64 rg = distinct_roots_mod_p({K.coeffs[3], K.coeffs[2], K.coeffs[1], K.coeffs[0]}, p);
        if ((rf == 3) != (rg == 3)) {
            rep.over_k = true;
            rep.reason = "cyclic splitting field of F differs from K (prime " + std::to_string(p) + ")";
            return rep;
        }
    }
    rep.reason = "splitting field of F coincides with K; F factors over K";
    return rep;
}

} // namespace cnc
