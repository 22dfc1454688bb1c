#include "cnc/density.hpp"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"
#include "cnc/parallel.hpp"
#include "cnc/parametrize.hpp"

#include <cmath>

namespace cnc {

using boost::multiprecision::cpp_int;

namespace {

cpp_int big_pow(u64 p, int e) { return boost::multiprecision::pow(cpp_int(p), static_cast<unsigned>(e)); }

BigRat inv_pow(u64 p, int e) { return BigRat(cpp_int(1), big_pow(p, e)); }

// Root counts modulo p^j for every j. Past the depth where the counts of simple p-adic roots
// have stabilized (j > 2 v_p(disc) and four equal consecutive counts) they are constant in j,
// so depths beyond 2^62 reuse the stable count.
class LocalDensity {
public:
    LocalDensity(const BinaryCubicForm& F, u64 p) : F_(F), p_(p) {
        const int vd = F.disc == 0 ? 0 : valuation(static_cast<u64>(F.disc < 0 ? -F.disc : F.disc), p);
        if (F.disc != 0 && vd == 0) {
            // Hensel: simple roots modulo p lift uniquely.
            counts_.push_back(raw(1));
            stable_ = 1;
            return;
        }
        const int start = 2 * vd + 1;
        const long double lp = std::log2(static_cast<long double>(p));
        for (int J = 1; (J + 3) * lp < 62; ++J) {
            counts_.push_back(raw(J));
            if (J >= start + 3 && counts_[J - 1] == counts_[J - 2] && counts_[J - 2] == counts_[J - 3] &&
                counts_[J - 3] == counts_[J - 4]) {
                stable_ = J;
                return;
            }
        }
        stable_ = 0;
    }
    // minus + zero at depth j >= 1.
    u64 count(int j) const {
        if (j <= static_cast<int>(counts_.size())) return counts_[j - 1];
        if (stable_ == 0) throw Error(ErrorKind::CapExceeded, "root counts modulo p^j did not stabilize below 2^62");
        return counts_.back();
    }
    BigRat exact(int j) const {
        if (j == 0) return BigRat(1);
        const BigRat head = BigRat(cpp_int(p_ - 1) * count(j)) * inv_pow(p_, j + 1);
        const BigRat rest = j <= 3 ? BigRat(1) : exact(j - 3);
        return head + rest * inv_pow(p_, 2);
    }
    long double approx(int j) const {
        if (j == 0) return 1;
        const long double P = static_cast<long double>(p_);
        const long double head = (1 - 1 / P) * std::pow(P, -j) * static_cast<long double>(count(j));
        const long double rest = j <= 3 ? 1.0L : approx(j - 3);
        return head + rest / (P * P);
    }

private:
    u64 raw(int j) const {
        const LocalRootCounts rc = local_root_counts(F_, p_, j);
        return rc.minus + rc.zero;
    }
    BinaryCubicForm F_;
    u64 p_;
    std::vector<u64> counts_;
    int stable_ = 0;
};

// sum_{j <= v} (chi * chi^2)(p^j).
i64 conv_prefix(const CubicCharacter& c, u64 p, int v) {
    i64 s = 0;
    for (int j = 0; j <= v; ++j) s += chi_conv_pk(c, p, j);
    return s;
}

} // namespace

long double to_ld(const BigRat& r) { return r.convert_to<long double>(); }

BigRat rho_plus_density_exact(const BinaryCubicForm& F, u64 p, int j) { return LocalDensity(F, p).exact(j); }

BigRat kp_prefactor(const CubicCharacter& c, u64 p) {
    const BigRat ip = inv_pow(p, 1);
    if (c.exponent(static_cast<i64>(p)) == 0) return (1 - ip) * (1 - ip);
    return 1 + ip + ip * ip;
}

KpResult kp(const BinaryCubicForm& F, const CubicCharacter& c, u64 p, long double tol) {
    if (c.modulus() % p == 0) throw Error(ErrorKind::RamifiedPrime, "K_p needs p not dividing q");
    if (!is_prime(p)) throw Error(ErrorKind::Validation, std::to_string(p) + " is not prime");
    KpResult r;
    r.p = p;
    r.split = c.exponent(static_cast<i64>(p)) == 0;
    r.prefactor = to_ld(kp_prefactor(c, p));
    // The two prefactors multiply to a real number; cross-check against the Eisenstein product.
    const auto z1 = c.value(static_cast<i64>(p), 1).to_complex(), z2 = c.value(static_cast<i64>(p), 2).to_complex();
    const double P = static_cast<double>(p);
    const auto direct = (1.0 - z1 / P) * (1.0 - z2 / P);
    if (std::abs(direct.imag()) > 1e-12 || std::abs(direct.real() - static_cast<double>(r.prefactor)) > 1e-12)
        throw std::logic_error("K_p prefactor disagrees with the character values");

    const LocalDensity ld(F, p);
    int small = 0;
    long double s = 0;
    int nu = 0;
    for (;; ++nu) {
        if (nu > 400) throw Error(ErrorKind::Nonconvergence, "K_p series did not settle");
        const long double term = ld.approx(nu) * static_cast<long double>(chi_conv_pk(c, p, nu));
        s += term;
        small = std::fabs(term) < tol ? small + 1 : 0;
        if (small >= 3 && nu >= 6) break;
    }
    r.series = s;
    r.value = r.prefactor * s;
    r.nu_max = nu;
    long double t = 0;
    for (int j = nu + 1; j <= nu + 20; ++j)
        t += ld.approx(j) * std::fabs(static_cast<long double>(chi_conv_pk(c, p, j)));
    r.tail = 2 * r.prefactor * t;
    return r;
}

std::vector<KqLimitStep> kq_limit(const BinaryCubicForm& F, const CubicCharacter& c, int k_max) {
    const u64 q = c.modulus();
    if (k_max < 1) throw Error(ErrorKind::Validation, "k_max must be at least 1");
    const long double budget = 2.0L * k_max * std::log10(static_cast<long double>(q));
    if (budget > 9.0L + 1e-12L) throw Error(ErrorKind::Budget, "K_q limit needs q^{2k} <= 1e9");
    std::vector<KqLimitStep> out;
    for (int k = 1; k <= k_max; ++k) {
        const u64 d = ipow_checked(q, k);
        const EpsilonSet E(c, d);
        const std::size_t chunks = static_cast<std::size_t>(std::min<u64>(d, 256));
        auto counts = parallel_map<u64>(chunks, [&](std::size_t ch) {
            u64 cnt = 0;
            for (u64 n = ch; n < d; n += chunks) {
                const u64 n2 = mulmod(n, n, d), n3 = mulmod(n2, n, d);
                CubicStepper st({static_cast<i64>(mulmod(mod_floor(F.a[3], d), n3, d)),
                                 static_cast<i64>(mulmod(mod_floor(F.a[2], d), n2, d)),
                                 static_cast<i64>(mulmod(mod_floor(F.a[1], d), n, d)), static_cast<i64>(mod_floor(F.a[0], d))},
                                d);
                for (u64 m = 0; m < d; ++m, st.step())
                    if (E.contains(st.value())) ++cnt;
            }
            return cnt;
        });
        KqLimitStep st;
        st.k = k;
        for (u64 v : counts) st.count += v;
        st.value = 3.0L * static_cast<long double>(st.count) / (static_cast<long double>(d) * static_cast<long double>(d));
        for (const auto& pp : c.modulus_factorization())
            st.tail += 3 * LocalDensity(F, pp.p).approx(k * pp.k);
        out.push_back(st);
    }
    return out;
}

namespace {

// All exponent vectors with entries in [0, caps[i]].
std::vector<std::vector<int>> exponent_box(const std::vector<int>& caps) {
    std::vector<std::vector<int>> out;
    std::vector<int> e(caps.size(), 0);
    while (true) {
        out.push_back(e);
        std::size_t i = 0;
        while (i < e.size() && e[i] == caps[i]) e[i++] = 0;
        if (i == e.size()) break;
        ++e[i];
    }
    return out;
}

} // namespace

KqWsumResult kq_wsum(const BinaryCubicForm& F, const CubicCharacter& c, int cap) {
    if (cap < 0) throw Error(ErrorKind::Validation, "cap must be nonnegative");
    const u64 q = c.modulus();
    const Factorization& qf = c.modulus_factorization();
    const std::size_t r = qf.size();
    const u64 phiq = euler_phi(qf);
    const BigRat pref = BigRat(3 * phiq) / BigRat(cpp_int(q) * q);

    // d-sum: truncated and complete.
    BigRat sd_cap = 1, sd_full = 1;
    for (const auto& pp : qf) {
        BigRat s = 0;
        for (int e = 0; e <= cap; ++e) s += inv_pow(pp.p, 2 * e);
        sd_cap *= s;
        sd_full *= BigRat(cpp_int(pp.p) * pp.p, cpp_int(pp.p) * pp.p - 1);
    }

    WCache cache(F, c);
    auto smooth = [&](const std::vector<int>& e) {
        u64 v = 1;
        for (std::size_t i = 0; i < r; ++i) v *= ipow_checked(qf[i].p, e[i]);
        return v;
    };
    auto weight = [&](const std::vector<int>& e) {
        BigRat w = 1;
        for (std::size_t i = 0; i < r; ++i) w *= inv_pow(qf[i].p, e[i]);
        return w;
    };

    const auto box = exponent_box(std::vector<int>(r, cap));
    BigRat sum_cap = 0, sum_d1_tail = 0;
    for (const auto& e2 : box) {
        const u64 d2 = smooth(e2);
        // Exponent of p_i in d2 q; beyond it W no longer depends on d1.
        std::vector<int> top(r);
        for (std::size_t i = 0; i < r; ++i) top[i] = qf[i].k + e2[i];
        BigRat a_cap = 0;
        for (const auto& e1 : box) {
            std::vector<int> e3(r);
            for (std::size_t i = 0; i < r; ++i) e3[i] = std::min(e1[i], top[i]);
            a_cap += BigRat(cache.alpha_sum(smooth(e3), d2)) * weight(e1);
        }
        // Complete d1-sum: exponents at the top stand for the geometric tail sum_{j >= top} p^-j.
        BigRat a_full = 0;
        for (const auto& e3 : exponent_box(top)) {
            BigRat w = weight(e3);
            for (std::size_t i = 0; i < r; ++i)
                if (e3[i] == top[i]) w *= BigRat(cpp_int(qf[i].p), cpp_int(qf[i].p - 1));
            a_full += BigRat(cache.alpha_sum(smooth(e3), d2)) * w;
        }
        const BigRat inv_d2 = weight(e2);
        sum_cap += a_cap * inv_d2;
        sum_d1_tail += (a_full - a_cap) * inv_d2;
    }

    KqWsumResult res;
    res.cap = cap;
    res.value = to_ld(pref * sd_cap * sum_cap);
    res.tail_d = to_ld(pref * (sd_full - sd_cap) * sum_cap);
    res.tail_d1 = to_ld(pref * sd_full * sum_d1_tail);

    // d2 beyond the box: sum_alpha sum_d1 |W| / d1 <= |G1| (q/phi(q)) q^2 rho+(d2) / (phi(q) d2).
    long double inside = 1, full = 1;
    for (const auto& pp : qf) {
        long double t_in = 0, t_out = 0, last = 0, prev = 0;
        int j = 0;
        const LocalDensity ld(F, pp.p);
        for (; j <= cap; ++j) t_in += to_ld(ld.exact(j));
        for (; j <= cap + 60; ++j) {
            prev = last;
            last = ld.approx(j);
            t_out += last;
        }
        // Geometric remainder past the last computed term.
        const long double ratio = std::max(std::pow(static_cast<long double>(pp.p), -2.0L / 3), prev > 0 ? last / prev : 0.0L);
        if (ratio < 1) t_out += last * ratio / (1 - ratio);
        inside *= t_in;
        full *= t_in + t_out;
    }
    const long double ld_q = static_cast<long double>(q), ld_phi = static_cast<long double>(phiq);
    const long double kconst = static_cast<long double>(c.kernel().size()) * ld_q * ld_q * ld_q / (ld_phi * ld_phi);
    res.tail_d2 = to_ld(pref * sd_full) * kconst * (full - inside);
    res.w_evaluations = cache.size();
    return res;
}

KpgResult kpg_brute(const CubicField& K, const CubicCharacter& c, const BinaryCubicForm& F, u64 p, int k) {
    if (c.modulus() % p == 0) throw Error(ErrorKind::RamifiedPrime, "K_pg comparison needs p not dividing q");
    if (k < 1) throw Error(ErrorKind::Validation, "k must be at least 1");
    const u64 m = ipow_checked(p, k);
    if (static_cast<u128>(m) * m > 1'000'000'000) throw Error(ErrorKind::Budget, "K_pg needs p^{2k} <= 1e9");

    KpgResult r;
    r.p = p;
    r.k = k;
    std::vector<u64> s_by_val(k + 1);
    if (static_cast<u128>(m) * m * m <= 10'000'000) {
        r.s_route = "histogram";
        const auto h = s_count_histogram(K, p, k);
        std::vector<bool> seen(k + 1, false);
        for (u64 A = 0; A < m; ++A) {
            const int v = A == 0 ? k : valuation(A, p);
            if (!seen[v]) {
                s_by_val[v] = h[A];
                seen[v] = true;
            } else if (s_by_val[v] != h[A]) {
                throw std::logic_error("S(A, p^k) is not a function of v_p(A)");
            }
        }
    } else {
        r.s_route = "closed";
        for (int v = 0; v <= k; ++v) s_by_val[v] = s_count_closed(K, c, p, k, v);
    }
    std::vector<std::uint8_t> val(m);
    for (u64 A = 0; A < m; ++A) val[A] = static_cast<std::uint8_t>(A == 0 ? k : valuation(A, p));

    const std::size_t chunks = static_cast<std::size_t>(std::min<u64>(m, 256));
    auto parts = parallel_map<u128>(chunks, [&](std::size_t ch) {
        u128 s = 0;
        for (u64 n = ch; n < m; n += chunks) {
            const u64 n2 = mulmod(n, n, m), n3 = mulmod(n2, n, m);
            CubicStepper st({static_cast<i64>(mulmod(mod_floor(F.a[3], m), n3, m)), static_cast<i64>(mulmod(mod_floor(F.a[2], m), n2, m)),
                             static_cast<i64>(mulmod(mod_floor(F.a[1], m), n, m)), static_cast<i64>(mod_floor(F.a[0], m))},
                            m);
            for (u64 x = 0; x < m; ++x, st.step()) s += s_by_val[val[st.value()]];
        }
        return s;
    });
    u128 total = 0;
    for (u128 v : parts) total += v;
    cpp_int num = static_cast<u64>(total >> 64);
    num <<= 64;
    num += static_cast<u64>(total);
    r.exact = BigRat(num, big_pow(p, 4 * k));
    r.value = to_ld(r.exact);

    // Abel summation: kpg(k) = pref sum_{j<k} c_j D(j) + D(k) (S(0)/p^{2k} - pref C(k-1)).
    const BigRat pref = kp_prefactor(c, p);
    BigRat rhs = 0;
    const LocalDensity ld(F, p);
    for (int j = 0; j < k; ++j) rhs += pref * chi_conv_pk(c, p, j) * ld.exact(j);
    const BigRat dk = ld.exact(k);
    const BigRat edge = BigRat(s_by_val[k]) * inv_pow(p, 2 * k) - pref * conv_prefix(c, p, k - 1);
    rhs += dk * edge;
    r.matched_depth = rhs == r.exact;

    long double t = std::fabs(to_ld(dk * edge));
    for (int j = k; j <= k + 40; ++j)
        t += to_ld(pref) * ld.approx(j) * std::fabs(static_cast<long double>(chi_conv_pk(c, p, j)));
    r.trunc_bound = t;
    return r;
}

BigRat kpg_exhaustive(const CubicField& K, const BinaryCubicForm& F, u64 p, int k) {
    const u64 m = ipow_checked(p, k);
    if (std::pow(static_cast<long double>(m), 5) > 1e9L) throw Error(ErrorKind::OracleScale, "exhaustive K_pg needs p^{5k} <= 1e9");
    std::vector<u64> pv;
    pv.reserve(m * m * m);
    for (u64 y = 0; y < m; ++y)
        for (u64 z = 0; z < m; ++z)
            for (u64 t = 0; t < m; ++t)
                pv.push_back(norm_form_eval_mod(K, static_cast<i64>(y), static_cast<i64>(z), static_cast<i64>(t), m));
    u64 count = 0;
    for (u64 x1 = 0; x1 < m; ++x1)
        for (u64 x2 = 0; x2 < m; ++x2) {
            const u64 f = F.eval_mod(static_cast<i64>(x1), static_cast<i64>(x2), m);
            for (u64 v : pv)
                if (v == f) ++count;
        }
    return BigRat(cpp_int(count), big_pow(p, 4 * k));
}

DensityReport k_total(const BinaryCubicForm& F, const CubicCharacter& c, const CubicField& K, u64 p_max, long double tol,
                      int wsum_cap) {
    DensityReport rep;
    rep.h4 = check_irreducible_over_field(F, K);
    if (!rep.h4.over_k) throw Error(ErrorKind::NotIrreducible, "F is not irreducible over K: " + rep.h4.reason);
    if (p_max < 2) throw Error(ErrorKind::Validation, "p_max must be at least 2");
    rep.p_max = p_max;
    rep.tol = tol;
    rep.kq = kq_wsum(F, c, wsum_cap);

    std::vector<u64> ps;
    for (u64 p : primes_up_to(2 * p_max))
        if (c.modulus() % p != 0) ps.push_back(p);
    const auto rows = parallel_map<KpResult>(ps.size(), [&](std::size_t i) { return kp(F, c, ps[i], tol); });
    long double prod = 1, prod2 = 1;
    for (const auto& kr : rows) {
        prod2 *= kr.value;
        if (kr.p <= p_max) {
            prod *= kr.value;
            rep.primes.push_back({kr.p, kr.value, kr.nu_max, kr.tail});
        }
    }
    rep.euler_product = prod;
    rep.euler_product_doubled = prod2;
    rep.tail_estimate = std::fabs(prod2 / prod - 1);
    rep.k_total = rep.kq.value * prod;
    rep.l_product = l_value_product(c, 1e-9L).product;
    return rep;
}

} // namespace cnc
