#include "cnc/region.hpp"

#include "cnc/errors.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <sstream>

namespace cnc {

long double RegionSpec::volume() const { return std::numbers::pi_v<long double> * a * b; }

long double RegionSpec::sigma() const { return std::max(a, b); }

bool RegionSpec::contains(i64 m, i64 n, long double xi) const {
    const long double M = m, N = n;
    return M * M * b * b + N * N * a * a <= a * a * b * b * xi * xi;
}

bool RegionSpec::row(i64 m, long double xi, i64& nmax) const {
    if (!contains(m, 0, xi)) return false;
    const long double rem = a * a * xi * xi - static_cast<long double>(m) * m;
    i64 n = static_cast<i64>(std::floor(b / a * std::sqrt(std::max<long double>(rem, 0))));
    while (n > 0 && !contains(m, n, xi)) --n;
    while (contains(m, n + 1, xi)) ++n;
    nmax = n;
    return true;
}

bool RegionSpec::column(i64 n, long double xi, i64& mmax) const {
    if (!contains(0, n, xi)) return false;
    const long double rem = b * b * xi * xi - static_cast<long double>(n) * n;
    i64 m = static_cast<i64>(std::floor(a / b * std::sqrt(std::max<long double>(rem, 0))));
    while (m > 0 && !contains(m, n, xi)) --m;
    while (contains(m + 1, n, xi)) ++m;
    mmax = m;
    return true;
}

i64 RegionSpec::m_extent(long double xi) const {
    i64 m = static_cast<i64>(std::floor(a * xi));
    while (m > 0 && !contains(m, 0, xi)) --m;
    while (contains(m + 1, 0, xi)) ++m;
    return m;
}

i64 RegionSpec::n_extent(long double xi) const {
    i64 n = static_cast<i64>(std::floor(b * xi));
    while (n > 0 && !contains(0, n, xi)) --n;
    while (contains(0, n + 1, xi)) ++n;
    return n;
}

std::string RegionSpec::describe() const {
    std::ostringstream os;
    if (kind == Kind::Disc)
        os << "disc:" << static_cast<double>(a);
    else
        os << "ellipse:" << static_cast<double>(a) << "," << static_cast<double>(b);
    return os.str();
}

RegionSpec parse_region(const std::string& s) {
    auto colon = s.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::Validation, "region must be disc:R or ellipse:A,B");
    const std::string kind = s.substr(0, colon), rest = s.substr(colon + 1);
    try {
        if (kind == "disc") {
            const long double r = std::stold(rest);
            if (!(r > 0)) throw Error(ErrorKind::Validation, "radius must be positive");
            return RegionSpec::disc(r);
        }
        if (kind == "ellipse") {
            auto comma = rest.find(',');
            if (comma == std::string::npos) throw Error(ErrorKind::Validation, "ellipse needs two semi-axes");
            const long double a = std::stold(rest.substr(0, comma)), b = std::stold(rest.substr(comma + 1));
            if (!(a > 0 && b > 0)) throw Error(ErrorKind::Validation, "semi-axes must be positive");
            return RegionSpec::ellipse(a, b);
        }
    } catch (const std::logic_error&) {
        throw Error(ErrorKind::Validation, "unparseable region '" + s + "'");
    }
    throw Error(ErrorKind::Validation, "unknown region kind '" + kind + "'");
}

long double region_theta(const RegionSpec& R, const std::array<i64, 4>& f) {
    // |F| is homogeneous of degree 3, so its sup on the region is attained on the boundary.
    long double best = 0;
    const int samples = 20000;
    for (int i = 0; i < samples; ++i) {
        const long double th = 2 * std::numbers::pi_v<long double> * i / samples;
        const long double x = R.a * std::cos(th), y = R.b * std::sin(th);
        const long double v = std::fabs(f[0] * x * x * x + f[1] * x * x * y + f[2] * x * y * y + f[3] * y * y * y);
        best = std::max(best, v);
    }
    return std::cbrt(best) * 1.01L;
}

} // namespace cnc
