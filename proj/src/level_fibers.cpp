#include "ecstat/level_fibers.hpp"

#include <algorithm>
#include <numeric>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

namespace {

struct GroupElems {
    int64_t n1, n2;
    int64_t order(int64_t x, int64_t y) const {
        int64_t o1 = n1 / std::gcd(x, n1);
        int64_t o2 = n2 / std::gcd(y, n2);
        return std::lcm(o1, o2);
    }
};

} // namespace

int64_t count_injections(const AbelianRank2& A, const AbelianRank2& B) {
    static std::map<std::tuple<int64_t, int64_t, int64_t, int64_t>, int64_t> memo;
    auto key = std::make_tuple(A.m1, A.m2, B.m1, B.m2);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;

    GroupElems G{B.m1, B.m2};
    // candidate images of the generators: elements killed by m1 resp. m2
    std::vector<std::pair<int64_t, int64_t>> u_cands, v_cands;
    for (int64_t x = 0; x < B.m1; ++x)
        for (int64_t y = 0; y < B.m2; ++y) {
            int64_t o = G.order(x, y);
            if (A.m1 % o == 0) u_cands.emplace_back(x, y);
            if (A.m2 % o == 0) v_cands.emplace_back(x, y);
        }
    int64_t count = 0;
    for (auto [ux, uy] : u_cands)
        for (auto [vx, vy] : v_cands) {
            bool injective = true;
            for (int64_t i = 0; i < A.m1 && injective; ++i)
                for (int64_t j = 0; j < A.m2; ++j) {
                    if (i == 0 && j == 0) continue;
                    if (mod_floor(i * ux + j * vx, B.m1) == 0 &&
                        mod_floor(i * uy + j * vy, B.m2) == 0) {
                        injective = false;
                        break;
                    }
                }
            if (injective) ++count;
        }
    memo[key] = count;
    return count;
}

Rat fiber_size(const LevelSpec& spec, const IsoClassRecord& record, int64_t q) {
    if (std::gcd(q, spec.level()) != 1)
        throw coprimality_error("fiber_size: q = " + std::to_string(q) +
                                " shares a factor with the level " + std::to_string(spec.level()));
    auto [m1, m2] = spec.torsion_group();
    int64_t inj = count_injections(AbelianRank2(m1, m2), AbelianRank2(record.n1, record.n2));
    return Rat(inj, record.aut_count);
}

Rat wps_weight(int64_t u0, int64_t u1, WpsPointTag tag, int64_t q) {
    if (!is_prime(q) && q < 2) throw bad_input_error("wps_weight: q must be prime");
    auto mu = [&](int64_t k) { return std::gcd(k, q - 1); };
    switch (tag) {
        case WpsPointTag::star: return Rat(1);
        case WpsPointTag::interior: return Rat(q - 1, mu(std::gcd(u0, u1)));
        case WpsPointTag::axis0: return Rat(q - 1, mu(u0));
        case WpsPointTag::axis1: return Rat(q - 1, mu(u1));
    }
    throw bad_input_error("wps_weight: bad tag");
}

Rat HGammaTable::sum() const {
    Rat s = 0;
    for (const auto& [a, v] : values) s += v;
    return s;
}

HGammaTable h_gamma(const LevelSpec& spec, const CurveCensus& census) {
    int64_t q = census.p;
    if (std::gcd(q, 6 * spec.level()) != 1)
        throw coprimality_error("h_gamma: census prime " + std::to_string(q) +
                                " not coprime to 6 * level");
    HGammaTable table{spec, q, {}};
    for (int64_t a = 0; a * a <= 4 * q; a = (a <= 0 ? -a + 1 : -a)) table.values[a] = 0;
    Rat scale(q - 1, Int(q) * q);
    for (const auto& rec : census.classes) table.values[rec.trace_a] += scale * fiber_size(spec, rec, q);
    return table;
}

Rat moment(const HGammaTable& table, int R) {
    Rat s = 0;
    for (const auto& [a, v] : table.values) s += Rat(ipow(Int(a), R)) * v;
    return s;
}

Rat expectation_phi(const AbelianRank2& A, const CurveCensus& census,
                    const std::function<Int(int64_t)>& weight) {
    if (std::gcd(census.p, A.m1) != 1)
        throw coprimality_error("expectation_phi: gcd(q, m1) != 1");
    Rat s = 0;
    for (const auto& rec : census.classes) {
        if (count_injections(A, AbelianRank2(rec.n1, rec.n2)) == 0) continue;
        s += Rat(weight(rec.trace_a), rec.aut_count);
    }
    return s / census.p;
}

GroupLattice omega_lattice(const LevelSpec& spec) {
    int64_t MN = spec.level(), M = spec.M;
    GroupLattice lat;
    for (int64_t t : divisors(MN))
        if (t % M == 0) lat.groups.emplace_back(MN, t);
    // divisor order: groups[j] < groups[i] iff t_j | t_i properly, and the
    // sorted-by-t order refines it
    std::sort(lat.groups.begin(), lat.groups.end());
    AbelianRank2 torsion(spec.torsion_group().first, spec.torsion_group().second);
    for (const auto& A : lat.groups) lat.omega_tilde.emplace_back(count_injections(torsion, A));
    lat.omega.resize(lat.groups.size());
    for (size_t i = 0; i < lat.groups.size(); ++i) {
        Rat w = lat.omega_tilde[i];
        for (size_t j = 0; j < i; ++j) {
            // strict containment via injection existence
            if (count_injections(lat.groups[j], lat.groups[i]) > 0 &&
                !(lat.groups[j] == lat.groups[i]))
                w -= lat.omega[j];
        }
        lat.omega[i] = w;
    }
    return lat;
}

std::pair<Rat, Rat> moment_identity_sides(const LevelSpec& spec, const CurveCensus& census, int R) {
    int64_t q = census.p;
    HGammaTable table = h_gamma(spec, census);
    Rat lhs = Rat(q, q - 1) * moment(table, R);
    GroupLattice lat = omega_lattice(spec);
    Rat rhs = 0;
    for (size_t i = 0; i < lat.groups.size(); ++i) {
        Rat e = expectation_phi(lat.groups[i], census, [R](int64_t a) { return ipow(Int(a), R); });
        rhs += lat.omega[i] * e;
    }
    return {lhs, rhs};
}

} // namespace ecstat
