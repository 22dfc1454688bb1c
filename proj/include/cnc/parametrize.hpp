#pragma once

#include "cnc/character.hpp"
#include "cnc/congruence.hpp"
#include "cnc/region.hpp"

#include <array>
#include <map>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

namespace cnc {

// True when every prime factor of d divides q.
bool divides_q_infinity(u64 d, const CubicCharacter& c);

// W_{alpha,d1,d2}: beta in [1, d2 q], gcd(beta, rad d1) = 1, F(d1, beta) = alpha d2 mod d2 q.
struct WSet {
    u64 alpha = 0;
    u64 d1 = 1;
    u64 d2 = 1;
    std::vector<u64> members;
};

// Exhaustive scan over beta; d2 q <= 1e8.
WSet wset(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1, u64 d2);

// |W_{alpha,d1,d2}| by root lifting per prime of q; d2 q < 2^62.
u64 w_count(const BinaryCubicForm& F, const CubicCharacter& c, u64 alpha, u64 d1, u64 d2);

// sum over alpha in G1 of |W_{alpha,d1,d2}|.
u64 w_alpha_sum(const BinaryCubicForm& F, const CubicCharacter& c, u64 d1, u64 d2);

// Alpha-sums keyed by (d3, d2), d3 = gcd(d1, d2 q). Only the alpha-sum is invariant in d1
// for composite q (alpha is permuted by a cube), so per-alpha counts are never cached.
class WCache {
public:
    WCache(const BinaryCubicForm& F, const CubicCharacter& c) : F_(F), c_(c) {}
    u64 alpha_sum(u64 d1, u64 d2);
    std::size_t size() const;

private:
    BinaryCubicForm F_;
    CubicCharacter c_;
    mutable std::mutex mu_;
    std::map<std::pair<u64, u64>, u64> memo_;
};

// x = U (m1, n1) with U = [[d1, 0], [beta, d2 q]].
struct ParamBranch {
    u64 alpha = 0, beta = 0, d1 = 1, d2 = 1;
    std::array<std::array<i64, 2>, 2> U{};
    // F(U x) / d2; integral because F(U x) = m^3 alpha d2 mod d2 q.
    BinaryCubicForm transformed;
    std::string transformed_region;

    i64 det() const { return U[0][0] * U[1][1] - U[0][1] * U[1][0]; }
};

// Validates beta in W_{alpha,d1,d2}.
ParamBranch make_branch(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R, u64 alpha, u64 beta, u64 d1,
                        u64 d2);

// One lattice point produced by a branch, with r3 of the transformed value.
struct BranchPoint {
    u64 d1, alpha, d2, beta;
    i64 m1, n1, m, n;
    u64 r3;
};

struct BranchBounds {
    u64 d1 = 0;  // max |m| on R(xi)
    u64 d2 = 0;  // max |F| on R(xi)
};

// Every point U(m1, n1) in R(xi) with gcd(m1, q) = 1 over all branches, with d1 <= max |m| and
// d2 <= max |F| on R(xi). A nonzero branch one layer past either bound raises TruncationInsufficient.
std::vector<BranchPoint> branch_points(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R, long double xi,
                                       BranchBounds* bounds = nullptr);

struct QDecompositionReport {
    long double xi = 0;
    u64 q_direct = 0;                     // Q(F, xi, R), origin excluded
    std::vector<std::pair<u64, u64>> q1;  // (d, Q1(F, xi/d, R))
    u64 q1_total = 0;
    u64 q1_at_xi = 0;        // Q1(F, xi, R) by direct scan
    u64 branch_total = 0;    // sum of Q2 over branches
    u64 axis_term = 0;       // points (0, n), gcd(n, q) = 1, which no branch reaches
    u64 branches_used = 0;   // branches with at least one point
    u64 d1_bound = 0, d2_bound = 0;  // truncation: d1 <= max |m|, d2 <= max |F|
    u64 lattice_points = 0;
    bool outer_ok() const { return q_direct == q1_total; }
    bool inner_ok() const { return q1_at_xi == branch_total + axis_term; }
};

// Exact check of Q = sum_d Q1(xi/d) and Q1 = sum over branches of Q2; xi <= 200.
QDecompositionReport q_decomposition_check(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R,
                                           long double xi);

} // namespace cnc
