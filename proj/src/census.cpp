#include "cnc/census.hpp"

#include "cnc/arith.hpp"
#include "cnc/errors.hpp"
#include "cnc/parallel.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace cnc {

namespace {

struct BandSum {
    u64 q = 0, points = 0;
    FactorHistogram hist{};
};

int bucket(double micros) {
    int b = 0;
    for (double lim = 1; b < 4 && micros >= lim; lim *= 10) ++b;
    return b;
}

void add_point(const BinaryCubicForm& F, const CubicCharacter& c, i64 m, i64 n, bool timed, BandSum& s) {
    ++s.points;
    if (m == 0 && n == 0) return;
    const i128 v = F.eval(m, n);
    if (v == 0) throw Error(ErrorKind::ZeroValueEncountered, "F vanishes at a nonzero lattice point; F is reducible");
    const u64 a = static_cast<u64>(v < 0 ? -v : v);
    if (!timed) {
        s.q += r3(c, factor_uncached(a));
        return;
    }
    const auto t0 = std::chrono::steady_clock::now();
    const Factorization f = factor_uncached(a);
    const double us = std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - t0).count();
    ++s.hist[bucket(us)];
    s.q += r3(c, f);
}

} // namespace

CensusCount q_empirical(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R, long double xi, ScanOrder order,
                        bool timed) {
    if (!(xi > 0)) throw Error(ErrorKind::Validation, "xi must be positive");
    if (xi * R.sigma() > 1e4L) throw Error(ErrorKind::Budget, "census needs xi sigma <= 1e4");
    const bool rows = order == ScanOrder::Rows;
    const i64 ext = rows ? R.m_extent(xi) : R.n_extent(xi);
    const auto bands = parallel_map<BandSum>(static_cast<std::size_t>(2 * ext + 1), [&](std::size_t i) {
        BandSum s;
        const i64 u = static_cast<i64>(i) - ext;
        i64 vmax = 0;
        if (!(rows ? R.row(u, xi, vmax) : R.column(u, xi, vmax))) return s;
        for (i64 v = -vmax; v <= vmax; ++v) {
            if (rows)
                add_point(F, c, u, v, timed, s);
            else
                add_point(F, c, v, u, timed, s);
        }
        return s;
    });
    CensusCount out;
    for (const auto& b : bands) {
        out.q += b.q;
        out.points += b.points;
        for (int k = 0; k < 5; ++k) out.factor_times[k] += b.hist[k];
    }
    return out;
}

long double main_term(long double k_total, long double l_product, const RegionSpec& R, long double xi) {
    return k_total * l_product * R.volume() * xi * xi;
}

CensusReport convergence_run(const BinaryCubicForm& F, const CubicCharacter& c, const CubicField& K, const RegionSpec& R,
                             const std::vector<long double>& xi_list, const DensityConfig& cfg, bool timed) {
    if (xi_list.empty()) throw Error(ErrorKind::Validation, "xi list is empty");
    for (std::size_t i = 1; i < xi_list.size(); ++i)
        if (!(xi_list[i] > xi_list[i - 1])) throw Error(ErrorKind::Validation, "xi values must be strictly ascending");
    for (long double xi : xi_list)
        if (xi * R.sigma() > 1e4L) throw Error(ErrorKind::Budget, "census needs xi sigma <= 1e4");

    CensusReport rep;
    rep.density = k_total(F, c, K, cfg.p_max, cfg.tol, cfg.wsum_cap);
    rep.volume = R.volume();
    rep.sigma = R.sigma();
    rep.theta = region_theta(R, F.a);
    for (long double xi : xi_list) {
        const auto t0 = std::chrono::steady_clock::now();
        const CensusCount byrow = q_empirical(F, c, R, xi, ScanOrder::Rows, timed);
        const CensusCount bycol = q_empirical(F, c, R, xi, ScanOrder::Columns);
        if (byrow.q != bycol.q || byrow.points != bycol.points)
            throw std::logic_error("row and column scans disagree");
        CensusRow row;
        row.xi = xi;
        row.points = byrow.points;
        row.q = byrow.q;
        row.main_term = main_term(rep.density.k_total, rep.density.l_product, R, xi);
        row.ratio = static_cast<long double>(row.q) / row.main_term;
        row.seconds = std::chrono::duration<long double>(std::chrono::steady_clock::now() - t0).count();
        const long double lo = 1 / std::sqrt(xi), hi = std::pow(xi, 1.5L);
        row.window_ok = lo <= rep.sigma && rep.sigma <= hi && lo <= rep.theta && rep.theta <= hi;
        if (!row.window_ok) {
            std::ostringstream os;
            os << "xi = " << static_cast<double>(xi) << ": sigma or theta outside [1/sqrt(xi), xi^1.5]";
            rep.warnings.push_back(os.str());
        }
        for (int k = 0; k < 5; ++k) rep.factor_times[k] += byrow.factor_times[k];
        rep.rows.push_back(row);
    }
    for (auto& row : rep.rows)
        for (const auto& other : rep.rows)
            if (other.xi == 2 * row.xi) row.stability = other.ratio / row.ratio - 1;
    return rep;
}

std::string census_csv(const CensusReport& rep) {
    std::ostringstream os;
    os << "xi,points,Q,main_term,ratio,seconds\r\n";
    os << std::setprecision(17);
    for (const auto& r : rep.rows)
        os << static_cast<double>(r.xi) << ',' << r.points << ',' << r.q << ',' << static_cast<double>(r.main_term) << ','
           << static_cast<double>(r.ratio) << ',' << static_cast<double>(r.seconds) << "\r\n";
    return os.str();
}

} // namespace cnc
