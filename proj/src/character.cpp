#include "cnc/character.hpp"

#include "cnc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

namespace cnc {

CubicCharacter::CubicCharacter(u64 q, std::vector<std::int8_t> table) : q_(q), qf_(factor(q)), table_(std::move(table)) {
    for (u64 n = 0; n < q_; ++n)
        if (table_[n] == 0) kernel_.push_back(n);
}

EisensteinInt CubicCharacter::value(i64 n, int power) const {
    const std::int8_t e = exponent(n);
    if (e == kZero) return {0, 0};
    return EisensteinInt::omega_pow(e * power);
}

CubicCharacter CubicCharacter::squared() const {
    std::vector<std::int8_t> t(table_);
    for (auto& e : t)
        if (e != kZero) e = static_cast<std::int8_t>((2 * e) % 3);
    return CubicCharacter(q_, std::move(t));
}

namespace {

struct LocalComponent {
    u64 p;
    int k;
    u64 pk;
    u64 generator;
    std::vector<i64> dlog;  // -1 for non-units
};

std::vector<LocalComponent> local_components(u64 q) {
    std::vector<LocalComponent> out;
    for (const auto& [p, k] : factor(q)) {
        const bool ok = (k == 1 && p % 3 == 1) || (p == 3 && k == 2);
        if (!ok) throw Error(ErrorKind::NoCubicCharacter, "no primitive cubic character modulo " + std::to_string(q));
        LocalComponent lc{p, k, ipow_checked(p, k), primitive_root_prime_power(p, k), {}};
        lc.dlog.assign(lc.pk, -1);
        u64 x = 1;
        const u64 phi = lc.pk / p * (p - 1);
        for (u64 e = 0; e < phi; ++e) {
            lc.dlog[x] = static_cast<i64>(e);
            x = mulmod(x, lc.generator, lc.pk);
        }
        out.push_back(std::move(lc));
    }
    std::sort(out.begin(), out.end(), [](const LocalComponent& a, const LocalComponent& b) { return a.pk < b.pk; });
    return out;
}

std::vector<std::int8_t> assemble(u64 q, const std::vector<LocalComponent>& comps, const std::vector<int>& js) {
    std::vector<std::int8_t> t(q, CubicCharacter::kZero);
    for (u64 n = 0; n < q; ++n) {
        int e = 0;
        bool unit = true;
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const i64 l = comps[i].dlog[n % comps[i].pk];
            if (l < 0) {
                unit = false;
                break;
            }
            e += js[i] * static_cast<int>(l % 3);
        }
        if (unit) t[n] = static_cast<std::int8_t>(e % 3);
    }
    return t;
}

} // namespace

std::vector<CubicCharacter> primitive_cubic_characters(u64 q) {
    if (q < 2) throw Error(ErrorKind::NoCubicCharacter, "modulus must exceed 1");
    const auto comps = local_components(q);
    std::vector<CubicCharacter> out;
    const std::size_t r = comps.size();
    // First component fixed to j = 1: picks one character from each conjugate pair and
    // makes chi(g) = w for the canonical generator of the smallest component.
    for (u64 mask = 0; mask < (u64{1} << (r - 1)); ++mask) {
        std::vector<int> js(r, 1);
        for (std::size_t i = 1; i < r; ++i) js[i] = (mask >> (i - 1)) & 1 ? 2 : 1;
        out.emplace_back(q, assemble(q, comps, js));
    }
    return out;
}

CubicCharacter character_mod(u64 q) { return primitive_cubic_characters(q).front(); }

namespace {

int roots_mod_p(const std::array<i64, 4>& g, u64 p) {
    int n = 0;
    for (u64 x = 0; x < p; ++x) {
        const u64 v = (mulmod(mulmod(x, x, p), x, p) + mulmod(mod_floor(g[1], p), mulmod(x, x, p), p) +
                       mulmod(mod_floor(g[2], p), x, p) + mod_floor(g[3], p)) % p;
        if (v == 0) ++n;
    }
    return n;
}

} // namespace

CubicCharacter character_for_field(const CubicField& K) {
    const u64 q = static_cast<u64>(K.conductor_q);
    const auto cands = primitive_cubic_characters(q);
    const u64 bad = static_cast<u64>(K.disc) * q;
    std::vector<std::pair<u64, bool>> splitting;
    for (u64 p : primes_up_to(2000)) {
        if (bad % p == 0) continue;
        splitting.emplace_back(p, roots_mod_p(K.coeffs, p) == 3);
    }
    for (const auto& c : cands) {
        bool ok = true;
        for (const auto& [p, split] : splitting)
            if (c.in_kernel(static_cast<i64>(p)) != split) {
                ok = false;
                break;
            }
        if (ok) return c;
    }
    throw Error(ErrorKind::NoCubicCharacter, "no order-3 character matches the splitting of the field");
}

EpsilonSet::EpsilonSet(const CubicCharacter& c, u64 d, int cap_factor) : d_(d) {
    if (d == 0) throw Error(ErrorKind::BadModulus, "zero modulus");
    const Factorization& qf = c.modulus_factorization();
    u64 rest = d;
    for (const auto& pp : qf)
        while (rest % pp.p == 0) rest /= pp.p;
    if (rest != 1) throw Error(ErrorKind::BadModulus, "modulus has a prime factor not dividing q");

    members_.assign(d, false);
    const std::size_t r = qf.size();
    std::vector<int> vq(r), vd(r), cap(r);
    for (std::size_t i = 0; i < r; ++i) {
        vq[i] = qf[i].k;
        vd[i] = valuation(d, qf[i].p);
        cap[i] = cap_factor * std::max(1, vd[i]);
    }
    std::set<std::pair<u64, u64>> seen;
    std::vector<int> e(r, 0);
    while (true) {
        u64 M = 1;
        for (std::size_t i = 0; i < r; ++i) M *= ipow_checked(qf[i].p, std::min(e[i] + vq[i], vd[i]));
        u64 d1 = 1 % M;
        for (std::size_t i = 0; i < r; ++i) d1 = mulmod(d1, powmod(qf[i].p, static_cast<u64>(e[i]), M), M);
        for (u64 alpha : c.kernel()) {
            const u64 res = mulmod(alpha % M, d1, M);
            if (!seen.insert({M, res}).second) continue;
            for (u64 n = res; n < d; n += M) members_[n] = true;
        }
        std::size_t i = 0;
        while (i < r && e[i] == cap[i]) e[i++] = 0;
        if (i == r) break;
        ++e[i];
    }
}

std::size_t EpsilonSet::size() const { return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), true)); }

bool epsilon_member(const CubicCharacter& c, u64 d, u64 n, int cap_factor) { return EpsilonSet(c, d, cap_factor).contains(n); }

LValueReport l_value_product(const CubicCharacter& c, long double tol) {
    using cld = std::complex<long double>;
    const u64 q = c.modulus();
    const long double pi = std::numbers::pi_v<long double>;
    auto chi = [&](u64 a) -> cld {
        const auto e = c.exponent(static_cast<i64>(a));
        if (e == CubicCharacter::kZero) return {0, 0};
        return std::polar<long double>(1.0L, 2 * pi * e / 3);
    };

    cld tau = 0;
    for (u64 a = 1; a < q; ++a) tau += chi(a) * std::polar<long double>(1.0L, 2 * pi * a / q);
    cld s = 0;
    for (u64 a = 1; a < q; ++a) s += std::conj(chi(a)) * std::log(2 * std::sin(pi * a / q));
    LValueReport rep;
    rep.l1_closed = -(tau / static_cast<long double>(q)) * s;

    // Partial series up to N = qM, then the digamma asymptotic for the remainder.
    const u64 M = std::max<u64>(2000, 200000 / q);
    cld partial = 0;
    for (u64 n = 1; n <= q * M; ++n) partial += chi(n) / static_cast<long double>(n);
    cld tail = 0;
    for (u64 a = 1; a <= q; ++a) {
        const long double z = M + static_cast<long double>(a) / q;
        const long double z2 = z * z;
        const long double psi = std::log(z) - 1 / (2 * z) - 1 / (12 * z2) + 1 / (120 * z2 * z2) - 1 / (252 * z2 * z2 * z2);
        tail -= chi(a) * psi;
    }
    rep.l1_series = partial + tail / static_cast<long double>(q);
    rep.series_terms = q * M;
    rep.product = std::norm(rep.l1_closed);
    rep.discrepancy = std::abs(rep.l1_closed - rep.l1_series);
    if (!(rep.discrepancy <= tol))
        throw Error(ErrorKind::Nonconvergence, "L(1,chi) closed form and series disagree by " + std::to_string(static_cast<double>(rep.discrepancy)));
    return rep;
}

} // namespace cnc
