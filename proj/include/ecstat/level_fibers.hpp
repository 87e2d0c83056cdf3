#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ecstat/ff_curves.hpp"
#include "ecstat/level_spec.hpp"
#include "ecstat/numeric.hpp"

namespace ecstat {

// Finite abelian group of rank <= 2 by invariant factors, m2 | m1.
struct AbelianRank2 {
    int64_t m1, m2;
    AbelianRank2(int64_t m1_, int64_t m2_) : m1(m1_), m2(m2_) {
        if (m1 < 1 || m2 < 1 || m1 % m2 != 0)
            throw bad_input_error("AbelianRank2: need m2 | m1, positive");
    }
    int64_t order() const { return m1 * m2; }
    bool operator<(const AbelianRank2& o) const {
        return m1 != o.m1 ? m1 < o.m1 : m2 < o.m2;
    }
    bool operator==(const AbelianRank2& o) const { return m1 == o.m1 && m2 == o.m2; }
};

// Number of injective homomorphisms A -> B, brute force over generator
// images. Memoized on ((m1,m2),(n1,n2)).
int64_t count_injections(const AbelianRank2& A, const AbelianRank2& B);

// |phi_Gamma^{-1}(E)| = #{Z/M x Z/MN embeddings into E(F_q)} / |Aut(E)|.
// Requires q coprime to the level.
Rat fiber_size(const LevelSpec& spec, const IsoClassRecord& record, int64_t q);

enum class WpsPointTag { interior, axis0, axis1, star };

// Fiber cardinality of A^2(F_q) -> P(u0,u1)(F_q)^*.
Rat wps_weight(int64_t u0, int64_t u1, WpsPointTag tag, int64_t q);

// a |-> H_Gamma(a, q) for |a| <= 2 sqrt(q), exact rationals.
struct HGammaTable {
    LevelSpec level;
    int64_t q;
    std::map<int64_t, Rat> values;

    Rat at(int64_t a) const {
        auto it = values.find(a);
        return it == values.end() ? Rat(0) : it->second;
    }
    Rat sum() const;
};

// H_Gamma(a,q) = (q-1)/q^2 * sum of fiber sizes over classes with trace a
// (representable genus-zero form). Requires gcd(q, 6*level) = 1.
HGammaTable h_gamma(const LevelSpec& spec, const CurveCensus& census);

Rat moment(const HGammaTable& table, int R);

// (1/q) sum over classes with A -> E(F_q) of weight(trace)/|Aut|.
Rat expectation_phi(const AbelianRank2& A, const CurveCensus& census,
                    const std::function<Int(int64_t)>& weight);

// The groups Z/MN x Z/M <= A_i <= Z/MN x Z/MN with the inclusion-ordered
// omega coefficients: omega_i = omega_tilde_i - sum_{A_j < A_i} omega_j.
struct GroupLattice {
    std::vector<AbelianRank2> groups; // ordered so subgroup comes before supergroup
    std::vector<Rat> omega_tilde;
    std::vector<Rat> omega;
};

GroupLattice omega_lattice(const LevelSpec& spec);

// q/(q-1) * sum_a a^R H(a,q) must equal sum_i omega_i E_q(a^R Phi_{A_i}).
// Returns both sides for inspection.
std::pair<Rat, Rat> moment_identity_sides(const LevelSpec& spec, const CurveCensus& census, int R);

} // namespace ecstat
