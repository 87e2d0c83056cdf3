#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "ecstat/numeric.hpp"

namespace ecstat {

// F_p, p >= 5 prime, so every elliptic curve has a short Weierstrass model.
struct PrimeField {
    int64_t p;
    explicit PrimeField(int64_t p_);
};

struct ShortWeierstrassCurve {
    PrimeField field;
    int64_t A, B; // residues in [0, p)
    ShortWeierstrassCurve(PrimeField f, int64_t A_, int64_t B_);
};

// One F_p-isomorphism class: lexicographically least (A,B) in the orbit of
// (A,B) |-> (u^4 A, u^6 B), with the point count, the invariant factors of
// the group of rational points, and the automorphism count.
struct IsoClassRecord {
    int64_t A, B;
    int64_t trace_a;     // p + 1 - #E(F_p)
    int64_t n1, n2;      // E(F_p) = Z/n1 x Z/n2, n2 | n1
    int aut_count;       // #{u in F_p^x : u^4 A = A, u^6 B = B}
    int64_t orbit_size;  // (p-1)/aut_count
};

struct CurveCensus {
    int64_t p;
    std::vector<IsoClassRecord> classes; // ordered by (A,B)

    // Sum of orbit sizes must be exactly p^2 - p (equivalently the mass
    // formula sum 1/|Aut| = p). Throws invariant_violation otherwise.
    void validate() const;
};

int64_t point_count(const ShortWeierstrassCurve& curve);
std::pair<int64_t, int64_t> group_structure(const ShortWeierstrassCurve& curve);
int automorphism_count(const ShortWeierstrassCurve& curve);

inline constexpr int64_t kCensusPrimeCeiling = 5003;
CurveCensus build_census(const PrimeField& field, int64_t ceiling = kCensusPrimeCeiling);

// JSON-lines cache, one record per class:
// {"p":..., "A":..., "B":..., "a":..., "n1":..., "n2":..., "aut":...}
std::string census_file_name(int64_t p); // census_p<prime>.jsonl
void save_census(const CurveCensus& census, const std::string& path);
CurveCensus load_census(const std::string& path); // validates on load

} // namespace ecstat
