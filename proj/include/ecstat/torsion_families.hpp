#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "ecstat/ff_curves.hpp"
#include "ecstat/level_spec.hpp"
#include "ecstat/level_fibers.hpp"
#include "ecstat/numeric.hpp"
#include "ecstat/wps_rational.hpp"

namespace ecstat {

// Families y^2 = x^3 + f(t0,t1) x + g(t0,t1) carrying a point of order N,
// built from the Tate normal form y^2 + (1-c)xy - by = x^3 - bx^2 with the
// order-N relations, cleared of denominators.
struct FamilyParametrization {
    LevelSpec level;
    WpsMorphism phi;                  // u -> (4,6), components (f, g)
    std::vector<int64_t> defect_primes; // primes where f, g can vanish simultaneously

    // coordinates of the distinguished torsion point on
    // y^2 = x^3 + f(t0,t1) x + g(t0,t1); nullopt at degenerate parameters
    std::optional<std::pair<Rat, Rat>> torsion_point(const Rat& t0, const Rat& t1) const;

    // internal: torsion point of the dehomogenized model as rational
    // functions of t = t0/t1 (empty for the two-parameter levels 3 and 4)
    std::vector<std::vector<Rat>> cert_num, cert_den; // [0]=X, [1]=Y coefficient lists
};

// level in {Gamma_1(N) : N = 3..10, 12}
FamilyParametrization builtin_parametrization(const LevelSpec& level);

struct GlobalCurve {
    int64_t t0, t1; // least source parameter
    Int A, B;       // minimal normalized pair in P(4,6)
    double height() const;
};

struct FamilyOptions {
    double margin = 4.0;        // scan radius C * B^{1/(2e)}
    int64_t max_points = 8'000'000;
    bool force_complete = false; // scan radius B/c0 instead (small B only)
    int64_t force_radius = 0;    // explicit scan radius override (self-tests)
};

struct FamilyResult {
    LevelSpec level;
    Rat bound;
    std::vector<GlobalCurve> curves; // sorted by (A, B), deduplicated
    bool complete = false;           // true when the scan provably covers height <= bound
    int64_t scan_radius = 0;
    int64_t points_scanned = 0;
};

FamilyResult generate_family(const FamilyParametrization& param, const Rat& B,
                             const FamilyOptions& opts = {});

enum class ReductionKind { good, split, nonsplit, additive };

struct LocalReport {
    int64_t q;
    ReductionKind kind;
    int64_t trace = 0; // for good reduction
    ReducedPoint reduced;
};

// Reduction type at q, q coprime to 6*level. A star reduction (additive) is
// a hard invariant violation for representable levels.
LocalReport local_type(const FamilyParametrization& param, const GlobalCurve& curve, int64_t q);

struct LocalStatistics {
    int64_t q;
    int64_t family_size = 0;
    std::map<std::vector<int64_t>, int64_t> per_point; // canonical good z -> count
    std::map<int64_t, int64_t> per_trace;
    int64_t mult_count = 0, split_count = 0, nonsplit_count = 0, additive_count = 0;
    // model predictions
    Rat predicted_mult_fraction;                      // cusps/(q+1)
    std::map<std::vector<int64_t>, Rat> predicted_per_point; // fiber/(q+1)
};

LocalStatistics local_statistics(const FamilyParametrization& param, const FamilyResult& family,
                                 int64_t q);

} // namespace ecstat
