#pragma once

#include "cnc/character.hpp"
#include "cnc/eisenstein.hpp"
#include "cnc/int_math.hpp"

#include <array>
#include <vector>

namespace cnc {

// Half-open log windows (e^{u_i}, e^{u_i + v_i}], v_i in [0, 1].
struct DeltaWindow {
    long double u1 = 0, v1 = 0, u2 = 0, v2 = 0;
};

struct DeltaResult {
    i64 sup_norm_sq = 0;
    EisensteinInt value;
    DeltaWindow witness;
    // Sorted-divisor index ranges [i1, j1] x [i2, j2] attaining the sup.
    std::array<std::size_t, 4> ranges{};
};

enum class DeltaWeights { Unit, Char };

// Exact sup over all window pairs of |sum_{d1 d2 | n} f1(d1) f2(d2)|^2 with
// (f1, f2) = (1, 1) or (chi, chi^2). Ties go to the lexicographically smallest ranges.
DeltaResult delta3(u64 n, DeltaWeights w, const CubicCharacter* c = nullptr);
DeltaResult delta3(const Factorization& f, DeltaWeights w, const CubicCharacter* c = nullptr);

// Lower bound from a grid over (u, v) on each axis; n <= 1e5, grid_step <= 0.01.
DeltaResult delta3_grid_oracle(u64 n, DeltaWeights w, const CubicCharacter* c, long double grid_step);

enum class MomentMode { Plain, CharSquared };

struct MomentReport {
    u64 x = 0;
    long double y = 1;
    MomentMode mode = MomentMode::Plain;
    long double sum = 0;
    std::vector<std::pair<u64, long double>> checkpoints;
    long double slope = 0;  // least squares slope of log(S/x) against log log x
    long double predicted_exponent = 0;
    long double rho = 0;
};

// sum_{n <= x} y^{omega(n)} Delta_3(n) (plain) or y^{omega(n)} |Delta_3(n, chi, chi^2)|^2.
MomentReport moment_sum(u64 x, long double y, const CubicCharacter& c, MomentMode mode);

// (1/2pi) int_0^{2pi} max(1, |1 + e^{it}|^2) dt - 2, by quadrature.
long double rho_constant();

} // namespace cnc
