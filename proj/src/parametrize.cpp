#include "cnc/parametrize.hpp"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"
#include "cnc/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <tuple>

namespace cnc {

namespace {

constexpr u64 kScanCap = 100'000'000;
constexpr u64 kMemberCap = 10'000'000;

void check_divisor(u64 d, const CubicCharacter& c, const char* name) {
    if (d == 0 || !divides_q_infinity(d, c))
        throw Error(ErrorKind::BadDivisor, std::string(name) + " = " + std::to_string(d) + " does not divide q^infinity");
}

void check_alpha(u64 alpha, const CubicCharacter& c) {
    const auto& ker = c.kernel();
    if (!std::binary_search(ker.begin(), ker.end(), alpha % c.modulus()))
        throw Error(ErrorKind::Validation, "alpha = " + std::to_string(alpha) + " is not in the kernel of chi");
}

// Coefficients (low first) of F(d1, beta) - target as a polynomial in beta, reduced mod m.
std::array<i64, 4> beta_poly(const BinaryCubicForm& F, u64 d1, u64 target, u64 m) {
    const u64 d = d1 % m, d2 = mulmod(d, d, m), d3 = mulmod(d2, d, m);
    const u64 c0 = (mulmod(mod_floor(F.a[0], m), d3, m) + m - target % m) % m;
    return {static_cast<i64>(c0), static_cast<i64>(mulmod(mod_floor(F.a[1], m), d2, m)),
            static_cast<i64>(mulmod(mod_floor(F.a[2], m), d, m)), static_cast<i64>(mod_floor(F.a[3], m))};
}

u64 poly_mod(const std::array<i64, 4>& f, u64 x, u64 m) {
    u64 r = 0;
    for (int i = 3; i >= 0; --i) r = (mulmod(r, x, m) + mod_floor(f[i], m)) % m;
    return r;
}

// All roots of f modulo p^k in [0, p^k), by tree lifting; whole residue classes are expanded.
std::vector<u64> list_roots(const std::array<i64, 4>& f, u64 p, int k, bool skip_zero_class) {
    const u64 m = ipow_checked(p, k);
    std::vector<u64> pw(k + 1, 1);
    for (int i = 1; i <= k; ++i) pw[i] = pw[i - 1] * p;
    std::vector<std::pair<u64, int>> stack;
    for (u64 r = 0; r < p; ++r) {
        if (skip_zero_class && r == 0) continue;
        if (poly_mod(f, r, p) == 0) stack.push_back({r, 1});
    }
    std::vector<u64> out;
    u64 work = 0;
    while (!stack.empty()) {
        const auto [r, j] = stack.back();
        stack.pop_back();
        if (++work > kLiftWorkCap) throw Error(ErrorKind::CapExceeded, "root listing exceeded the work cap");
        if (j == k) {
            out.push_back(r);
            continue;
        }
        // Taylor expansion of f(r + p^j T): if every scaled coefficient vanishes, the whole class is roots.
        const u64 r2 = mulmod(r, r, m);
        const u64 c1 = mod_floor(f[1], m), c2 = mod_floor(f[2], m), c3 = mod_floor(f[3], m);
        const u64 t1 = (c1 + mulmod(2, mulmod(c2, r, m), m) + mulmod(3, mulmod(c3, r2, m), m)) % m;
        const u64 t2 = (c2 + mulmod(3, mulmod(c3, r, m), m)) % m;
        auto vanish = [&](u64 t, int e) { return e >= k || mulmod(t, pw[e], m) == 0; };
        if (poly_mod(f, r, m) == 0 && vanish(t1, j) && vanish(t2, 2 * j) && vanish(c3, 3 * j)) {
            if (out.size() + pw[k - j] > kMemberCap) throw Error(ErrorKind::CapExceeded, "too many roots to list");
            for (u64 t = 0; t < pw[k - j]; ++t) out.push_back(r + t * pw[j]);
            continue;
        }
        for (u64 t = 0; t < p; ++t) {
            const u64 rr = r + t * pw[j];
            if (poly_mod(f, rr, pw[j + 1]) == 0) stack.push_back({rr, j + 1});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

struct Component {
    u64 p;
    int k;    // exponent of p in d2 q
    u64 mod;  // p^k
};

std::vector<Component> components(const CubicCharacter& c, u64 d2) {
    std::vector<Component> out;
    for (const auto& pp : c.modulus_factorization()) {
        const int k = pp.k + valuation(d2, pp.p);
        out.push_back({pp.p, k, ipow_checked(pp.p, k)});
    }
    return out;
}

// Inverse of a modulo m, gcd(a, m) = 1.
u64 inv_mod(u64 a, u64 m) {
    i128 t = 0, nt = 1, r = m, nr = a % m;
    while (nr != 0) {
        const i128 qq = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
        std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
    }
    if (t < 0) t += m;
    return static_cast<u64>(t);
}

std::vector<u64> smooth_up_to(const CubicCharacter& c, u64 bound) {
    std::vector<u64> out{1};
    for (const auto& pp : c.modulus_factorization()) {
        const std::size_t n = out.size();
        for (std::size_t i = 0; i < n; ++i)
            for (u64 v = out[i]; v <= bound / pp.p;) {
                v *= pp.p;
                out.push_back(v);
            }
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Smooth numbers just past the bound: d p > bound with d <= bound smooth.
std::vector<u64> smooth_frontier(const CubicCharacter& c, const std::vector<u64>& inside, u64 bound) {
    std::vector<u64> out;
    for (u64 d : inside)
        for (const auto& pp : c.modulus_factorization())
            if (d * pp.p > bound) out.push_back(d * pp.p);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

u64 abs_u(i128 v) { return static_cast<u64>(v < 0 ? -v : v); }

bool coprime_to_q(i64 m, const CubicCharacter& c) {
    for (const auto& pp : c.modulus_factorization())
        if (mod_floor(m, pp.p) == 0) return false;
    return true;
}

} // namespace

bool divides_q_infinity(u64 d, const CubicCharacter& c) {
    if (d == 0) return false;
    for (const auto& pp : c.modulus_factorization())
        while (d % pp.p == 0) d /= pp.p;
    return d == 1;
}

WSet wset(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1, u64 d2) {
    check_divisor(d1, c, "d1");
    check_divisor(d2, c, "d2");
    check_alpha(alpha, c);
    const u64 q = c.modulus();
    if (d2 > kScanCap / q) throw Error(ErrorKind::Budget, "W scan needs d2 q <= 1e8");
    const u64 M = d2 * q;
    const u64 rad1 = radical(d1);
    CubicStepper st(beta_poly(F, d1, mulmod(alpha % q, d2, M), M), M);
    WSet w{alpha, d1, d2, {}};
    bool zero_member = false;
    for (u64 beta = 0; beta < M; ++beta, st.step())
        if (st.value() == 0 && std::gcd(beta, rad1) == 1) {
            if (beta == 0)
                zero_member = true;
            else
                w.members.push_back(beta);
        }
    if (zero_member) w.members.push_back(M);
    for (u64 beta : w.members)
        if (poly_mod(beta_poly(F, d1, mulmod(alpha % q, d2, M), M), beta % M, M) != 0)
            throw std::logic_error("W member fails its defining congruence");
    return w;
}

namespace {

// Roots per component: beta mod p^k with F(d1, beta) = alpha d2, beta a unit when p | d1.
std::vector<std::vector<u64>> component_roots(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1,
                                              u64 d2, bool list) {
    std::vector<std::vector<u64>> out;
    for (const Component& cp : components(c, d2)) {
        if (cp.mod > (u64{1} << 62)) throw Error(ErrorKind::Overflow, "d2 q exceeds 2^62");
        const u64 target = mulmod(alpha % cp.mod, d2 % cp.mod, cp.mod);
        const auto f = beta_poly(F, d1, target, cp.mod);
        const bool unit = d1 % cp.p == 0;
        if (list) {
            out.push_back(list_roots(f, cp.p, cp.k, unit));
        } else {
            u64 n = 0;
            if (unit) {
                // Lifting the zero class can be expensive and it is excluded anyway.
                for (u64 r = 1; r < cp.p; ++r)
                    if (poly_mod(f, r, cp.p) == 0) n += count_roots_prime_power(f, 0, cp.p, cp.k, r);
            } else {
                n = count_roots_prime_power(f, 0, cp.p, cp.k);
            }
            out.push_back(std::vector<u64>(1, n));
        }
    }
    return out;
}

} // namespace

u64 w_count(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1, u64 d2) {
    check_divisor(d1, c, "d1");
    check_divisor(d2, c, "d2");
    check_alpha(alpha, c);
    u64 n = 1;
    for (const auto& v : component_roots(F, c, alpha, d1, d2, false)) n *= v[0];
    return n;
}

u64 w_alpha_sum(const BinaryCubicForm& F, const CubicCharacter& c, u64 d1, u64 d2) {
    u64 s = 0;
    for (u64 alpha : c.kernel()) s += w_count(F, c, alpha, d1, d2);
    return s;
}

u64 WCache::alpha_sum(u64 d1, u64 d2) {
    const u64 M = c_.modulus() * d2;
    const u64 d3 = std::gcd(d1, M);
    {
        std::lock_guard<std::mutex> lk(mu_);
        auto it = memo_.find({d3, d2});
        if (it != memo_.end()) return it->second;
    }
    const u64 v = w_alpha_sum(F_, c_, d3, d2);
    std::lock_guard<std::mutex> lk(mu_);
    memo_.emplace(std::make_pair(d3, d2), v);
    return v;
}

std::size_t WCache::size() const {
    std::lock_guard<std::mutex> lk(mu_);
    return memo_.size();
}

namespace {

// Members of W by CRT over the per-prime root lists.
std::vector<u64> w_members(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1, u64 d2) {
    const auto comps = components(c, d2);
    const auto roots = component_roots(F, c, alpha, d1, d2, true);
    const u64 M = d2 * c.modulus();
    std::vector<u64> acc{0};
    u64 mod = 1;
    for (std::size_t i = 0; i < comps.size(); ++i) {
        const u64 pk = comps[i].mod;
        const u64 inv = inv_mod(mod % pk, pk);
        std::vector<u64> next;
        next.reserve(acc.size() * roots[i].size());
        for (u64 a : acc)
            for (u64 r : roots[i]) {
                // x = a mod mod, x = r mod pk.
                const u64 t = mulmod((r + pk - a % pk) % pk, inv, pk);
                next.push_back(a + mod * t);
            }
        acc.swap(next);
        mod *= pk;
        if (acc.size() > kMemberCap) throw Error(ErrorKind::CapExceeded, "W set too large to list");
    }
    for (u64& b : acc)
        if (b == 0) b = M;
    std::sort(acc.begin(), acc.end());
    return acc;
}

BinaryCubicForm transformed_form(const BinaryCubicForm& F, u64 beta, u64 d1, u64 d2, u64 q) {
    const i128 D = static_cast<i128>(d2) * q, b = beta, e = d1;
    const auto& a = F.a;
    const i128 c0 = F.eval(static_cast<i64>(d1), static_cast<i64>(beta));
    const i128 c1 = D * (a[1] * e * e + 2 * a[2] * e * b + 3 * a[3] * b * b);
    const i128 c2 = D * D * (a[2] * e + 3 * a[3] * b);
    const i128 c3 = D * D * D * a[3];
    std::array<i64, 4> out{};
    const i128 cs[4] = {c0, c1, c2, c3};
    const i128 lim = static_cast<i128>(1) << 62;
    for (int i = 0; i < 4; ++i) {
        if (cs[i] % static_cast<i128>(d2) != 0) throw std::logic_error("F(U x) is not divisible by d2");
        const i128 v = cs[i] / static_cast<i128>(d2);
        if (v >= lim || v <= -lim) throw Error(ErrorKind::Overflow, "transformed form coefficient exceeds 2^62");
        out[i] = static_cast<i64>(v);
    }
    return BinaryCubicForm(out);
}

} // namespace

ParamBranch make_branch(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R, u64 alpha, u64 beta, u64 d1,
                        u64 d2) {
    check_divisor(d1, c, "d1");
    check_divisor(d2, c, "d2");
    check_alpha(alpha, c);
    const u64 q = c.modulus();
    const u64 M = d2 * q;
    if (beta < 1 || beta > M) throw Error(ErrorKind::Validation, "beta must lie in [1, d2 q]");
    if (std::gcd(beta, radical(d1)) != 1) throw Error(ErrorKind::Validation, "beta shares a factor with d1");
    if (poly_mod(beta_poly(F, d1, mulmod(alpha % q, d2, M), M), beta % M, M) != 0)
        throw Error(ErrorKind::Validation, "beta is not in W_{alpha,d1,d2}");
    ParamBranch br;
    br.alpha = alpha;
    br.beta = beta;
    br.d1 = d1;
    br.d2 = d2;
    br.U = {{{static_cast<i64>(d1), 0}, {static_cast<i64>(beta), static_cast<i64>(M)}}};
    br.transformed = transformed_form(F, beta, d1, d2, q);
    std::ostringstream os;
    os << "{x : [[" << d1 << ",0],[" << beta << "," << M << "]] x in " << R.describe() << "}";
    br.transformed_region = os.str();
    return br;
}

std::vector<BranchPoint> branch_points(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R,
                                       long double xi, BranchBounds* bounds) {
    const u64 q = c.modulus();
    const i64 mext = R.m_extent(xi);
    if (mext <= 0) {
        if (bounds) *bounds = {0, 0};
        return {};
    }
    // Largest |F| over the lattice points of R(xi); d2 divides F(x), so d2 <= maxF.
    u64 maxF = 1;
    for (i64 m = -mext; m <= mext; ++m) {
        i64 nmax;
        if (!R.row(m, xi, nmax)) continue;
        for (i64 n = -nmax; n <= nmax; ++n) maxF = std::max(maxF, abs_u(F.eval(m, n)));
    }
    if (bounds) *bounds = {static_cast<u64>(mext), maxF};
    const auto d1_in = smooth_up_to(c, static_cast<u64>(mext));
    const auto d2_in = smooth_up_to(c, maxF);
    auto d1_all = d1_in, d2_all = d2_in;
    const auto d1_out = smooth_frontier(c, d1_in, static_cast<u64>(mext));
    const auto d2_out = smooth_frontier(c, d2_in, maxF);
    d1_all.insert(d1_all.end(), d1_out.begin(), d1_out.end());
    d2_all.insert(d2_all.end(), d2_out.begin(), d2_out.end());

    struct Job {
        u64 d1, d2, alpha;
        bool frontier;
    };
    std::vector<Job> jobs;
    for (u64 d1 : d1_all)
        for (u64 d2 : d2_all)
            for (u64 alpha : c.kernel())
                jobs.push_back({d1, d2, alpha, d1 > static_cast<u64>(mext) || d2 > maxF});

    auto results = parallel_map<std::vector<BranchPoint>>(jobs.size(), [&](std::size_t i) {
        const Job& jb = jobs[i];
        std::vector<BranchPoint> pts;
        if (w_count(F, c, jb.alpha, jb.d1, jb.d2) == 0) return pts;
        const i64 M = static_cast<i64>(jb.d2 * q);
        const i64 d1 = static_cast<i64>(jb.d1);
        for (u64 beta : w_members(F, c, jb.alpha, jb.d1, jb.d2)) {
            const BinaryCubicForm G = transformed_form(F, beta, jb.d1, jb.d2, q);
            const i64 b = static_cast<i64>(beta);
            for (i64 m1 = -(mext / d1); m1 <= mext / d1; ++m1) {
                if (m1 == 0 || !coprime_to_q(m1, c)) continue;
                const i64 m = d1 * m1;
                i64 nmax;
                if (!R.row(m, xi, nmax)) continue;
                // n = beta m1 + M n1 in [-nmax, nmax].
                const i64 lo = -nmax - b * m1, hi = nmax - b * m1;
                const i64 n1_lo = lo >= 0 ? (lo + M - 1) / M : -((-lo) / M);
                const i64 n1_hi = hi >= 0 ? hi / M : -((-hi + M - 1) / M);
                for (i64 n1 = n1_lo; n1 <= n1_hi; ++n1) {
                    const i64 n = b * m1 + M * n1;
                    const i128 g = G.eval(m1, n1);
                    if (g * static_cast<i128>(jb.d2) != F.eval(m, n)) throw std::logic_error("branch value mismatch");
                    if (g == 0) throw Error(ErrorKind::ZeroValueEncountered, "F vanishes at a nonzero lattice point");
                    pts.push_back({jb.d1, jb.alpha, jb.d2, beta, m1, n1, m, n, r3(c, abs_u(g))});
                }
            }
        }
        if (jb.frontier && !pts.empty())
            throw Error(ErrorKind::TruncationInsufficient, "a branch beyond the divisor bounds reaches R(xi)");
        return pts;
    });
    std::vector<BranchPoint> out;
    for (auto& v : results) out.insert(out.end(), v.begin(), v.end());
    return out;
}

QDecompositionReport q_decomposition_check(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R,
                                           long double xi) {
    if (!(xi >= 0 && xi <= 200)) throw Error(ErrorKind::OracleScale, "exact decomposition requires 0 <= xi <= 200");
    QDecompositionReport rep;
    rep.xi = xi;
    const i64 mext = R.m_extent(xi);
    const auto ds = smooth_up_to(c, static_cast<u64>(std::max<i64>(mext, R.n_extent(xi)) + 1));

    struct Row {
        u64 points = 0, q = 0;
        std::vector<u64> q1;  // per entry of ds
        u64 axis = 0;
    };
    const std::size_t rows = mext >= 0 ? static_cast<std::size_t>(2 * mext + 1) : 0;
    auto per_row = parallel_map<Row>(rows, [&](std::size_t i) {
        Row r;
        r.q1.assign(ds.size(), 0);
        const i64 m = static_cast<i64>(i) - mext;
        i64 nmax;
        if (!R.row(m, xi, nmax)) return r;
        for (i64 n = -nmax; n <= nmax; ++n) {
            ++r.points;
            if (m == 0 && n == 0) continue;
            const i128 v = F.eval(m, n);
            if (v == 0) throw Error(ErrorKind::ZeroValueEncountered, "F vanishes at a nonzero lattice point");
            const u64 val = r3(c, abs_u(v));
            r.q += val;
            // x = d x' with x' primitive with respect to q: contributes to Q1(xi/d) at x'.
            const u64 g = std::gcd(static_cast<u64>(std::llabs(m)), static_cast<u64>(std::llabs(n)));
            u64 d = 1;
            for (const auto& pp : c.modulus_factorization())
                for (u64 t = g; t % pp.p == 0; t /= pp.p) d *= pp.p;
            const std::size_t k = static_cast<std::size_t>(std::lower_bound(ds.begin(), ds.end(), d) - ds.begin());
            if (k == ds.size() || ds[k] != d) throw std::logic_error("divisor list too short");
            r.q1[k] += val;
            if (d == 1 && m == 0) r.axis += val;
        }
        return r;
    });
    std::vector<u64> q1(ds.size(), 0);
    for (const Row& r : per_row) {
        rep.lattice_points += r.points;
        rep.q_direct += r.q;
        rep.axis_term += r.axis;
        for (std::size_t k = 0; k < ds.size(); ++k) q1[k] += r.q1[k];
    }
    // Q1(xi/d) is re-evaluated on the dilated region independently of the split above.
    for (std::size_t k = 0; k < ds.size(); ++k) {
        const u64 d = ds[k];
        u64 s = 0;
        const i64 ext = mext / static_cast<i64>(d);
        for (i64 m = -ext; m <= ext; ++m) {
            const i64 nlim = R.n_extent(xi) / static_cast<i64>(d);
            for (i64 n = -nlim; n <= nlim; ++n) {
                if (m == 0 && n == 0) continue;
                if (!R.contains(static_cast<i64>(d) * m, static_cast<i64>(d) * n, xi)) continue;
                bool prim = true;
                for (const auto& pp : c.modulus_factorization())
                    if (mod_floor(m, pp.p) == 0 && mod_floor(n, pp.p) == 0) prim = false;
                if (!prim) continue;
                s += r3(c, abs_u(F.eval(m, n)));
            }
        }
        if (s != q1[k]) throw std::logic_error("Q1 split disagrees with the dilated scan");
        rep.q1.push_back({d, s});
        rep.q1_total += s;
        if (d == 1) rep.q1_at_xi = s;
    }

    BranchBounds bb;
    const auto pts = branch_points(F, c, R, xi, &bb);
    rep.d1_bound = bb.d1;
    rep.d2_bound = bb.d2;
    std::vector<std::tuple<u64, u64, u64, u64>> used;
    for (const auto& p : pts) {
        rep.branch_total += p.r3;
        used.emplace_back(p.d1, p.alpha, p.d2, p.beta);
    }
    std::sort(used.begin(), used.end());
    rep.branches_used = static_cast<u64>(std::unique(used.begin(), used.end()) - used.begin());
    return rep;
}

} // namespace cnc
