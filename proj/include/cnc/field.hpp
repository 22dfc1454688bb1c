#pragma once

#include "cnc/int_math.hpp"

#include <boost/rational.hpp>

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cnc {

using Rat = boost::rational<i64>;
using RatMatrix3 = std::array<std::array<Rat, 3>, 3>;

// Ternary cubic P(y,z,t); coefficient order follows kNormMonomials.
struct NormForm {
    std::array<i64, 10> coeffs{};
};

// Exponents (y,z,t) of the ten cubic monomials, in storage order.
inline constexpr std::array<std::array<int, 3>, 10> kNormMonomials{{
    {3, 0, 0}, {2, 1, 0}, {2, 0, 1}, {1, 2, 0}, {1, 1, 1},
    {1, 0, 2}, {0, 3, 0}, {0, 2, 1}, {0, 1, 2}, {0, 0, 3},
}};

enum class BuiltinField { Q7, Q9, Q13 };

struct CubicField {
    // g(X) = X^3 + a X^2 + b X + c stored as {1, a, b, c}.
    std::array<i64, 4> coeffs{};
    i64 disc = 0;
    i64 conductor_q = 0;
    // Column j holds w_{j+1} in the power basis (1, alpha, alpha^2).
    RatMatrix3 basis_matrix{};
    NormForm norm_form;
    bool power_basis = true;
    // O_K principal is taken on trust, never computed.
    bool principal_assumed = true;
    std::vector<std::string> warnings;
};

CubicField make_builtin_field(BuiltinField name);
std::optional<BuiltinField> parse_builtin(const std::string& name);
std::string builtin_name(BuiltinField name);

// Throws NotIrreducible, NotCyclic or BadBasis.
CubicField make_field(const std::array<i64, 4>& g, const std::optional<RatMatrix3>& basis = std::nullopt);

// 18abcd - 4b^3 d + b^2 c^2 - 4 a c^3 - 27 a^2 d^2 for a X^3 + b X^2 + c X + d.
i128 cubic_disc_closed(const std::array<i64, 4>& g);
// -Res(g, g') / lc(g) via the Sylvester determinant; independent of the closed formula.
i128 cubic_disc_resultant(const std::array<i64, 4>& g);
// True when g has no rational root (sufficient and necessary for a cubic).
bool cubic_irreducible_over_q(const std::array<i64, 4>& g);

// Exact P(y,z,t); Overflow when |y|,|z|,|t| exceed 2^40.
i128 norm_form_eval(const CubicField& K, i64 y, i64 z, i64 t);
u64 norm_form_eval_mod(const CubicField& K, i64 y, i64 z, i64 t, u64 modulus);

// Product of two integral elements given by coordinates on the field's basis.
std::array<i64, 3> field_mul(const CubicField& K, const std::array<i64, 3>& u, const std::array<i64, 3>& v);

} // namespace cnc
