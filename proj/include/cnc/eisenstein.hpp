#pragma once

#include "cnc/int_math.hpp"

#include <complex>
#include <string>

namespace cnc {

// a + b*w with w = exp(2*pi*i/3), so w^2 = -1 - w.
struct EisensteinInt {
    i64 a = 0;
    i64 b = 0;

    constexpr EisensteinInt() = default;
    constexpr EisensteinInt(i64 a_, i64 b_ = 0) : a(a_), b(b_) {}

    static constexpr EisensteinInt omega_pow(int e) {
        switch (((e % 3) + 3) % 3) {
        case 0: return {1, 0};
        case 1: return {0, 1};
        default: return {-1, -1};
        }
    }

    constexpr bool is_zero() const { return a == 0 && b == 0; }
    constexpr bool is_real() const { return b == 0; }
    // |a + b w|^2 = a^2 - ab + b^2.
    constexpr i64 norm_sq() const { return a * a - a * b + b * b; }
    // Complex conjugate: w -> w^2.
    constexpr EisensteinInt conj() const { return {a - b, -b}; }

    constexpr EisensteinInt operator+(const EisensteinInt& o) const { return {a + o.a, b + o.b}; }
    constexpr EisensteinInt operator-(const EisensteinInt& o) const { return {a - o.a, b - o.b}; }
    constexpr EisensteinInt operator-() const { return {-a, -b}; }
    constexpr EisensteinInt operator*(const EisensteinInt& o) const {
        // (a + bw)(c + dw) = ac + (ad + bc)w + bd w^2
        return {a * o.a - b * o.b, a * o.b + b * o.a - b * o.b};
    }
    EisensteinInt& operator+=(const EisensteinInt& o) { return *this = *this + o; }
    EisensteinInt& operator-=(const EisensteinInt& o) { return *this = *this - o; }
    EisensteinInt& operator*=(const EisensteinInt& o) { return *this = *this * o; }
    constexpr bool operator==(const EisensteinInt&) const = default;

    std::complex<double> to_complex() const { return {a - 0.5 * b, 0.8660254037844386 * b}; }
    std::string str() const { return std::to_string(a) + (b < 0 ? "-" : "+") + std::to_string(b < 0 ? -b : b) + "w"; }
};

} // namespace cnc
