#include "ecstat/cusp_census.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

SL2ModN::SL2ModN(int64_t N_) : N(N_) {
    if (N < 1) throw bad_input_error("SL2ModN: N must be positive");
    for (int64_t a = 0; a < N; ++a)
        for (int64_t b = 0; b < N; ++b)
            for (int64_t c = 0; c < N; ++c)
                for (int64_t d = 0; d < N; ++d)
                    if (mod_floor(a * d - b * c, N) == 1 % N) elements.push_back({a, b, c, d});
    if (static_cast<int64_t>(elements.size()) != cardinality(N))
        throw invariant_violation("SL2ModN: cardinality mismatch at N=" + std::to_string(N));
}

int64_t SL2ModN::cardinality(int64_t N) {
    int64_t r = N * N * N;
    for (auto [p, e] : factorize(N)) r = r / (p * p) * (p * p - 1);
    return r;
}

bool SubgroupBar::member(const LevelSpec& spec, const Mat2& g) {
    int64_t L = spec.level(), M = spec.M;
    // Gamma_1(MN) condition mod L and Gamma(M) condition mod M
    bool g1 = g[0] == 1 % L && g[2] == 0 && g[3] == 1 % L;
    bool gm = mod_floor(g[0] - 1, M) == 0 && mod_floor(g[1], M) == 0 &&
              mod_floor(g[2], M) == 0 && mod_floor(g[3] - 1, M) == 0;
    return g1 && gm;
}

SubgroupBar build_subgroup(const LevelSpec& spec, int64_t ceiling) {
    if (spec.level() > ceiling)
        throw resource_limit_error("build_subgroup: level " + std::to_string(spec.level()) +
                                   " exceeds ceiling " + std::to_string(ceiling));
    SL2ModN sl2(spec.level());
    SubgroupBar bar{spec, {}};
    for (const auto& g : sl2.elements)
        if (SubgroupBar::member(spec, g)) bar.elements.push_back(g);
    return bar;
}

std::pair<int64_t, Rat> index_and_e(const LevelSpec& spec) {
    SubgroupBar bar = build_subgroup(spec);
    int64_t index = SL2ModN::cardinality(spec.level()) / static_cast<int64_t>(bar.elements.size());
    return {index, Rat(index, 24)};
}

namespace {

std::vector<Mat2> pm_subgroup(const SubgroupBar& bar, int64_t L) {
    std::set<Mat2> s;
    for (const auto& g : bar.elements) {
        s.insert(g);
        s.insert({mod_floor(-g[0], L), mod_floor(-g[1], L), mod_floor(-g[2], L), mod_floor(-g[3], L)});
    }
    return {s.begin(), s.end()};
}

std::pair<int64_t, int64_t> act(const std::pair<int64_t, int64_t>& alpha, const Mat2& g, int64_t L) {
    // row vector times matrix
    return {mod_floor(alpha.first * g[0] + alpha.second * g[2], L),
            mod_floor(alpha.first * g[1] + alpha.second * g[3], L)};
}

} // namespace

std::vector<CuspOrbit> cusp_orbits(const LevelSpec& spec, int64_t ceiling) {
    int64_t L = spec.level();
    SubgroupBar bar = build_subgroup(spec, ceiling);
    std::vector<Mat2> gens = pm_subgroup(bar, L);

    std::vector<std::pair<int64_t, int64_t>> surjections;
    for (int64_t a1 = 0; a1 < L; ++a1)
        for (int64_t a2 = 0; a2 < L; ++a2)
            if (std::gcd(std::gcd(a1, a2), L) == 1) surjections.emplace_back(a1, a2);

    std::set<std::pair<int64_t, int64_t>> seen;
    std::vector<CuspOrbit> orbits;
    for (const auto& alpha : surjections) {
        if (seen.count(alpha)) continue;
        // closure under the generator set (all of +-Gamma bar)
        std::set<std::pair<int64_t, int64_t>> orbit{alpha};
        std::vector<std::pair<int64_t, int64_t>> queue{alpha};
        while (!queue.empty()) {
            auto cur = queue.back();
            queue.pop_back();
            for (const auto& g : gens) {
                auto nxt = act(cur, g, L);
                if (orbit.insert(nxt).second) queue.push_back(nxt);
            }
        }
        for (const auto& x : orbit) seen.insert(x);
        orbits.push_back(CuspOrbit{{orbit.begin(), orbit.end()}});
    }
    std::sort(orbits.begin(), orbits.end(),
              [](const CuspOrbit& a, const CuspOrbit& b) { return a.least() < b.least(); });

    // partition check: disjoint and exhaustive by construction; verify size
    size_t total = 0;
    for (const auto& o : orbits) total += o.representatives.size();
    if (total != surjections.size())
        throw invariant_violation("cusp_orbits: orbits do not partition the surjections");
    return orbits;
}

int64_t rational_cusp_count(const LevelSpec& spec, int64_t q, int64_t ceiling) {
    int64_t L = spec.level();
    if (std::gcd(mod_floor(q, L), L) != 1)
        throw coprimality_error("rational_cusp_count: q = " + std::to_string(q) +
                                " shares a factor with the level " + std::to_string(L));
    auto orbits = cusp_orbits(spec, ceiling);
    // map from element to orbit id
    std::map<std::pair<int64_t, int64_t>, size_t> where;
    for (size_t i = 0; i < orbits.size(); ++i)
        for (const auto& x : orbits[i].representatives) where[x] = i;
    int64_t qm = mod_floor(q, L);
    int64_t count = 0;
    for (size_t i = 0; i < orbits.size(); ++i) {
        auto [a1, a2] = orbits[i].least();
        // fixed by the generator iff fixed by the whole cyclic group <q>
        if (where.at({a1, mod_floor(a2 * qm, L)}) == i) ++count;
    }
    return count;
}

} // namespace ecstat
