#include "cnc/delta.hpp"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"
#include "cnc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cnc {

namespace {

constexpr long double kE = 2.718281828459045235360287471352662498L;
constexpr std::size_t kMaxDivisors = 5000;

struct Weighted {
    std::vector<u64> D;
    std::vector<EisensteinInt> w1, w2;
    // partners[a] = indices b with D[a] * D[b] | n
    std::vector<std::vector<std::size_t>> partners;
};

Weighted prepare(u64 n, const Factorization& f, DeltaWeights w, const CubicCharacter* c) {
    if (w == DeltaWeights::Char && c == nullptr) throw Error(ErrorKind::Validation, "character weights need a character");
    Weighted W;
    W.D = divisors(f);
    if (W.D.size() > kMaxDivisors) throw Error(ErrorKind::OracleScale, "too many divisors for the window sweep");
    const std::size_t t = W.D.size();
    W.w1.resize(t);
    W.w2.resize(t);
    for (std::size_t i = 0; i < t; ++i) {
        if (w == DeltaWeights::Unit) {
            W.w1[i] = W.w2[i] = EisensteinInt{1, 0};
        } else {
            W.w1[i] = c->value(static_cast<i64>(W.D[i] % c->modulus()), 1);
            W.w2[i] = c->value(static_cast<i64>(W.D[i] % c->modulus()), 2);
        }
    }
    W.partners.resize(t);
    for (std::size_t a = 0; a < t; ++a) {
        const u64 rest = n / W.D[a];
        for (std::size_t b = 0; b < t && W.D[b] <= rest; ++b)
            if (rest % W.D[b] == 0) W.partners[a].push_back(b);
    }
    return W;
}

// Index ranges [i, j] whose divisor spread fits in an open factor of e.
std::vector<std::pair<std::size_t, std::size_t>> unit_runs(const std::vector<u64>& D) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < D.size(); ++i)
        for (std::size_t j = i; j < D.size() && static_cast<long double>(D[j]) < kE * static_cast<long double>(D[i]); ++j)
            runs.emplace_back(i, j);
    return runs;
}

void axis_window(const std::vector<u64>& D, std::size_t i, std::size_t j, long double& u, long double& v) {
    const long double li = std::log(static_cast<long double>(D[i])), lj = std::log(static_cast<long double>(D[j]));
    long double slack = 1 - (lj - li);
    if (i > 0) slack = std::min(slack, li - std::log(static_cast<long double>(D[i - 1])));
    const long double delta = slack / 2;
    u = li - delta;
    v = lj - li + delta;
}

DeltaResult finish(const Weighted& W, std::size_t i1, std::size_t j1, std::size_t i2, std::size_t j2, EisensteinInt val) {
    DeltaResult r;
    r.value = val;
    r.sup_norm_sq = val.norm_sq();
    r.ranges = {i1, j1, i2, j2};
    axis_window(W.D, i1, j1, r.witness.u1, r.witness.v1);
    axis_window(W.D, i2, j2, r.witness.u2, r.witness.v2);
    return r;
}

} // namespace

DeltaResult delta3(const Factorization& f, DeltaWeights w, const CubicCharacter* c) {
    const u64 n = unfactor(f);
    const Weighted W = prepare(n, f, w, c);
    const std::size_t t = W.D.size();
    const auto runs = unit_runs(W.D);

    std::vector<EisensteinInt> acc(t), prefix(t + 1);
    i64 best = -1;
    std::size_t b1 = 0, b2 = 0, b3 = 0, b4 = 0;
    EisensteinInt best_val;
    for (std::size_t i1 = 0; i1 < t; ++i1) {
        std::fill(acc.begin(), acc.end(), EisensteinInt{0, 0});
        for (std::size_t j1 = i1; j1 < t && static_cast<long double>(W.D[j1]) < kE * static_cast<long double>(W.D[i1]); ++j1) {
            // acc[b] = sum_{d1 in [i1, j1], d1 d2 | n} f1(d1) f2(D[b])
            if (W.w1[j1].is_zero()) continue;
            for (std::size_t b : W.partners[j1]) acc[b] += W.w1[j1] * W.w2[b];
            prefix[0] = {0, 0};
            for (std::size_t b = 0; b < t; ++b) prefix[b + 1] = prefix[b] + acc[b];
            for (const auto& [i2, j2] : runs) {
                const EisensteinInt s = prefix[j2 + 1] - prefix[i2];
                const i64 ns = s.norm_sq();
                if (ns > best) {
                    best = ns;
                    best_val = s;
                    b1 = i1;
                    b2 = j1;
                    b3 = i2;
                    b4 = j2;
                }
            }
        }
    }
    return finish(W, b1, b2, b3, b4, best_val);
}

DeltaResult delta3(u64 n, DeltaWeights w, const CubicCharacter* c) {
    if (n == 0 || n > 100'000'000) throw Error(ErrorKind::OracleScale, "delta3 requires 1 <= n <= 1e8");
    return delta3(factor(n), w, c);
}

DeltaResult delta3_grid_oracle(u64 n, DeltaWeights w, const CubicCharacter* c, long double h) {
    if (n == 0 || n > 100'000) throw Error(ErrorKind::OracleScale, "grid oracle requires 1 <= n <= 1e5");
    if (!(h > 0 && h <= 0.01L)) throw Error(ErrorKind::OracleScale, "grid step must lie in (0, 0.01]");
    const Factorization f = factor(n);
    const Weighted W = prepare(n, f, w, c);
    const std::size_t t = W.D.size();
    std::vector<long double> L(t);
    for (std::size_t i = 0; i < t; ++i) L[i] = std::log(static_cast<long double>(W.D[i]));

    // Ranges realized by some grid window (e^a, e^{a + v}] with a = -1 + k h, v = l h <= 1.
    std::vector<char> realized(t * t, 0);
    const long double top = std::log(static_cast<long double>(n));
    const long long lmax = static_cast<long long>(std::floor(1 / h + 1e-9L));
    for (long long k = 0;; ++k) {
        const long double a = -1 + k * h;
        if (a > top) break;
        const std::size_t s = static_cast<std::size_t>(std::upper_bound(L.begin(), L.end(), a) - L.begin());
        for (std::size_t e = s; e < t; ++e) {
            // smallest l with a + l h >= L[e]
            long long l = static_cast<long long>(std::ceil((L[e] - a) / h));
            if (l < 0) l = 0;
            while (l > 0 && a + (l - 1) * h >= L[e]) --l;
            while (a + l * h < L[e]) ++l;
            if (l > lmax) break;
            const long double end = a + std::min<long double>(l * h, 1);
            if (end < L[e]) break;
            if (e + 1 < t && end >= L[e + 1]) continue;
            realized[s * t + e] = 1;
        }
    }
    std::vector<std::pair<std::size_t, std::size_t>> ranges;
    for (std::size_t s = 0; s < t; ++s)
        for (std::size_t e = s; e < t; ++e)
            if (realized[s * t + e]) ranges.emplace_back(s, e);

    // 2D prefix sums of M[i][k] = f1(D_i) f2(D_k) [D_i D_k | n].
    std::vector<EisensteinInt> P((t + 1) * (t + 1));
    auto at = [&](std::size_t i, std::size_t k) -> EisensteinInt& { return P[i * (t + 1) + k]; };
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t k = 0; k < t; ++k) {
            EisensteinInt m{0, 0};
            if ((n / W.D[i]) % W.D[k] == 0) m = W.w1[i] * W.w2[k];
            at(i + 1, k + 1) = m + at(i, k + 1) + at(i + 1, k) - at(i, k);
        }
    i64 best = -1;
    std::size_t bi = 0, bj = 0;
    EisensteinInt best_val;
    for (std::size_t x = 0; x < ranges.size(); ++x)
        for (std::size_t y = 0; y < ranges.size(); ++y) {
            const auto [i1, j1] = ranges[x];
            const auto [i2, j2] = ranges[y];
            const EisensteinInt s = at(j1 + 1, j2 + 1) - at(i1, j2 + 1) - at(j1 + 1, i2) + at(i1, i2);
            if (s.norm_sq() > best) {
                best = s.norm_sq();
                best_val = s;
                bi = x;
                bj = y;
            }
        }
    return finish(W, ranges[bi].first, ranges[bi].second, ranges[bj].first, ranges[bj].second, best_val);
}

long double rho_constant() {
    // max(1, 2 + 2 cos t) switches branch at t = 2pi/3 and 4pi/3; integrate each piece by
    // composite Simpson.
    const long double pi = std::numbers::pi_v<long double>;
    auto simpson = [](auto g, long double a, long double b, int m) {
        const long double hh = (b - a) / m;
        long double s = g(a) + g(b);
        for (int i = 1; i < m; ++i) s += g(a + i * hh) * (i % 2 ? 4 : 2);
        return s * hh / 3;
    };
    auto integrand = [](long double t) { return std::max<long double>(1, 2 + 2 * std::cos(t)); };
    const long double total = simpson(integrand, 0, 2 * pi / 3, 2000) + simpson(integrand, 2 * pi / 3, 4 * pi / 3, 2000) +
                              simpson(integrand, 4 * pi / 3, 2 * pi, 2000);
    return total / (2 * pi) - 2;
}

MomentReport moment_sum(u64 x, long double y, const CubicCharacter& c, MomentMode mode) {
    if (x == 0 || x > 1'000'000) throw Error(ErrorKind::OracleScale, "moment sums require 1 <= x <= 1e6");
    MomentReport rep;
    rep.x = x;
    rep.y = y;
    rep.mode = mode;
    rep.rho = rho_constant();
    rep.predicted_exponent = mode == MomentMode::Plain ? std::max(y - 1, 3 * y - 3)
                                                       : std::max({y - 1, (rep.rho + 2) * y - 2, 3 * y - 3});

    // Smallest prime factor sieve.
    std::vector<std::uint32_t> spf(x + 1, 0);
    for (u64 i = 2; i <= x; ++i)
        if (spf[i] == 0)
            for (u64 j = i; j <= x; j += i)
                if (spf[j] == 0) spf[j] = static_cast<std::uint32_t>(i);

    constexpr u64 kChunk = 4096;
    const std::size_t chunks = static_cast<std::size_t>((x + kChunk - 1) / kChunk);
    const auto partial = parallel_map<std::vector<long double>>(chunks, [&](std::size_t ci) {
        std::vector<long double> vals;
        const u64 lo = ci * kChunk + 1, hi = std::min<u64>(x, (ci + 1) * kChunk);
        vals.reserve(hi - lo + 1);
        for (u64 n = lo; n <= hi; ++n) {
            Factorization f;
            for (u64 m = n; m > 1;) {
                const u64 p = spf[m];
                int k = 0;
                while (m % p == 0) {
                    m /= p;
                    ++k;
                }
                f.push_back({p, k});
            }
            const long double yw = std::pow(y, static_cast<long double>(f.size()));
            if (mode == MomentMode::Plain)
                vals.push_back(yw * static_cast<long double>(delta3(f, DeltaWeights::Unit).value.a));
            else
                vals.push_back(yw * static_cast<long double>(delta3(f, DeltaWeights::Char, &c).sup_norm_sq));
        }
        return vals;
    });

    std::vector<u64> marks;
    for (u64 m = x; m >= 16 && marks.size() < 6; m /= 2) marks.push_back(m);
    std::reverse(marks.begin(), marks.end());
    long double s = 0;
    u64 n = 0;
    std::size_t next = 0;
    for (const auto& chunk : partial)
        for (long double v : chunk) {
            s += v;
            ++n;
            if (next < marks.size() && n == marks[next]) {
                rep.checkpoints.emplace_back(n, s);
                ++next;
            }
        }
    rep.sum = s;
    if (rep.checkpoints.size() >= 2) {
        long double sx = 0, sy = 0, sxx = 0, sxy = 0;
        const long double m = static_cast<long double>(rep.checkpoints.size());
        for (const auto& [xx, ss] : rep.checkpoints) {
            const long double X = std::log(std::log(static_cast<long double>(xx)));
            const long double Y = std::log(ss / static_cast<long double>(xx));
            sx += X;
            sy += Y;
            sxx += X * X;
            sxy += X * Y;
        }
        rep.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    }
    return rep;
}

} // namespace cnc
