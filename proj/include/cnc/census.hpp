#pragma once

#include "cnc/character.hpp"
#include "cnc/congruence.hpp"
#include "cnc/density.hpp"
#include "cnc/field.hpp"
#include "cnc/region.hpp"

#include <array>
#include <optional>
#include <string>
#include <vector>

namespace cnc {

enum class ScanOrder { Rows, Columns };

// Factorization time buckets: < 1us, < 10us, < 100us, < 1ms, >= 1ms.
using FactorHistogram = std::array<u64, 5>;

struct CensusCount {
    u64 q = 0;       // sum of r3(|F(x)|) over nonzero x in R(xi)
    u64 points = 0;  // lattice points in R(xi), origin included
    FactorHistogram factor_times{};  // filled only when timed
};

// Point budget: xi sigma <= 1e4. F(x) = 0 at x != 0 raises ZeroValueEncountered.
CensusCount q_empirical(const BinaryCubicForm& F, const CubicCharacter& c, const RegionSpec& R, long double xi,
                        ScanOrder order = ScanOrder::Rows, bool timed = false);

// K(F) L(1,chi) L(1,chi^2) vol(R) xi^2.
long double main_term(long double k_total, long double l_product, const RegionSpec& R, long double xi);

struct DensityConfig {
    u64 p_max = 1000;
    long double tol = 1e-12L;
    int wsum_cap = 8;
};

struct CensusRow {
    long double xi = 0;
    u64 points = 0;
    u64 q = 0;
    long double main_term = 0;
    long double ratio = 0;
    long double seconds = 0;
    std::optional<long double> stability;  // ratio(2 xi) / ratio(xi) - 1 when 2 xi is in the run
    bool window_ok = true;                 // 1/sqrt(xi) <= sigma, theta <= xi^{3/2}
};

struct CensusReport {
    std::vector<CensusRow> rows;
    DensityReport density;
    long double volume = 0;
    long double sigma = 0;
    long double theta = 0;
    std::vector<std::string> warnings;
    FactorHistogram factor_times{};
};

// xi_list strictly ascending; every row is scanned in both orders and must agree.
CensusReport convergence_run(const BinaryCubicForm& F, const CubicCharacter& c, const CubicField& K, const RegionSpec& R,
                             const std::vector<long double>& xi_list, const DensityConfig& cfg = {}, bool timed = false);

// xi,points,Q,main_term,ratio,seconds
std::string census_csv(const CensusReport& rep);

} // namespace cnc
