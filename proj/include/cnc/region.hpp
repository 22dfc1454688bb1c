#pragma once

#include "cnc/int_math.hpp"

#include <array>
#include <string>

namespace cnc {

// Origin-centred disc or axis-aligned ellipse {(m/a)^2 + (n/b)^2 <= 1}, dilated by xi.
// Boundary points are included (closed region).
struct RegionSpec {
    enum class Kind { Disc, Ellipse };
    Kind kind = Kind::Disc;
    long double a = 1;  // semi-axis along m (radius for a disc)
    long double b = 1;  // semi-axis along n

    static RegionSpec disc(long double r) { return {Kind::Disc, r, r}; }
    static RegionSpec ellipse(long double a, long double b) { return {Kind::Ellipse, a, b}; }

    long double volume() const;
    // sup of the Euclidean norm on the region.
    long double sigma() const;
    bool contains(i64 m, i64 n, long double xi) const;
    // Integer bounds of the row |n| <= nmax(m) at dilation xi; returns false when the row is empty.
    bool row(i64 m, long double xi, i64& nmax) const;
    bool column(i64 n, long double xi, i64& mmax) const;
    i64 m_extent(long double xi) const;
    i64 n_extent(long double xi) const;
    std::string describe() const;
};

// Parses "disc:R" or "ellipse:A,B".
RegionSpec parse_region(const std::string& s);

// sup over the region of |F|^(1/3), by boundary sampling and homogeneity, with a 1% margin.
long double region_theta(const RegionSpec& R, const std::array<i64, 4>& form);

} // namespace cnc
