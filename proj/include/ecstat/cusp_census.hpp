#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "ecstat/level_spec.hpp"
#include "ecstat/numeric.hpp"

namespace ecstat {

using Mat2 = std::array<int64_t, 4>; // row major (a b; c d) over Z/N

// All of SL_2(Z/N).
struct SL2ModN {
    int64_t N;
    std::vector<Mat2> elements;
    explicit SL2ModN(int64_t N_);
    static int64_t cardinality(int64_t N); // N^3 prod_{p|N} (1 - 1/p^2)
};

// Image of Gamma_1(M,N) in SL_2(Z/MN): the matrices with a = d = 1, c = 0
// mod MN and b = 0 mod M.
struct SubgroupBar {
    LevelSpec spec;
    std::vector<Mat2> elements;
    static bool member(const LevelSpec& spec, const Mat2& g);
};

inline constexpr int64_t kLevelCeiling = 30;
SubgroupBar build_subgroup(const LevelSpec& spec, int64_t ceiling = kLevelCeiling);

// index = |SL2(Z/MN)| / |Gamma bar|, e = index / 24
std::pair<int64_t, Rat> index_and_e(const LevelSpec& spec);

// Orbit of surjections (Z/L)^2 -> Z/L, encoded by (alpha1, alpha2) with
// gcd(alpha1, alpha2, L) = 1, under the right action of +-Gamma bar.
struct CuspOrbit {
    std::vector<std::pair<int64_t, int64_t>> representatives; // sorted, full orbit
    std::pair<int64_t, int64_t> least() const { return representatives.front(); }
};

std::vector<CuspOrbit> cusp_orbits(const LevelSpec& spec, int64_t ceiling = kLevelCeiling);

// Number of orbits fixed by alpha2 |-> q^j alpha2 for all j, i.e. by the
// cyclic group generated by q in (Z/L)^x.
int64_t rational_cusp_count(const LevelSpec& spec, int64_t q, int64_t ceiling = kLevelCeiling);

} // namespace ecstat
