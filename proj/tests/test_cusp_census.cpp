#include <doctest.h>

#include <numeric>
#include <set>

#include "ecstat/arith.hpp"
#include "ecstat/cusp_census.hpp"
#include "ecstat/errors.hpp"

using namespace ecstat;

namespace {

int64_t classical_cusp_count(int64_t N) { // (1/2) sum_{d|N} phi(d) phi(N/d), N > 4
    int64_t s = 0;
    for (int64_t d : divisors(N)) s += euler_phi(d) * euler_phi(N / d);
    return s / 2;
}

} // namespace

TEST_CASE("subgroup sizes by congruence filtering") {
    CHECK(build_subgroup(LevelSpec::gamma1(5)).elements.size() == 5);
    CHECK(build_subgroup(LevelSpec::gamma(5)).elements.size() == 1);
    // Gamma_1(2,3) = Gamma(2) n Gamma_1(6): oracle filter of SL2(Z/6)
    SL2ModN sl2(6);
    int64_t oracle = 0;
    for (const auto& g : sl2.elements)
        if (g[0] == 1 && g[3] == 1 && g[2] == 0 && g[1] % 2 == 0) ++oracle;
    CHECK(static_cast<int64_t>(build_subgroup(LevelSpec(2, 3)).elements.size()) == oracle);
    CHECK(oracle == 3);
}

TEST_CASE("SL2 cardinality") {
    CHECK(SL2ModN::cardinality(5) == 120);
    CHECK(SL2ModN::cardinality(7) == 336);
    CHECK(SL2ModN::cardinality(12) == 1152);
    CHECK(static_cast<int64_t>(SL2ModN(6).elements.size()) == SL2ModN::cardinality(6));
}

TEST_CASE("index and e") {
    auto [i5, e5] = index_and_e(LevelSpec::gamma1(5));
    CHECK(i5 == 24);
    CHECK(e5 == Rat(1));
    auto [i7, e7] = index_and_e(LevelSpec::gamma1(7));
    CHECK(i7 == 48);
    CHECK(e7 == Rat(2));
    auto [ig5, eg5] = index_and_e(LevelSpec::gamma(5));
    CHECK(ig5 == 120);
    CHECK(eg5 == Rat(5));
    // direct subgroup cardinality: index = N^2 prod (1 - 1/p^2) for Gamma_1(N), N > 2
    for (int64_t N : {5, 6, 7, 8, 9, 10, 12}) {
        auto [idx, e] = index_and_e(LevelSpec::gamma1(N));
        int64_t expect = N * N;
        for (auto [p, ee] : factorize(N)) expect = expect / (p * p) * (p * p - 1);
        CHECK(idx == expect);
    }
}

TEST_CASE("orbit counts") {
    CHECK(cusp_orbits(LevelSpec::gamma1(5)).size() == 4);
    for (int64_t N : {5, 6, 7, 8, 9, 10, 12})
        CHECK(static_cast<int64_t>(cusp_orbits(LevelSpec::gamma1(N)).size()) ==
              classical_cusp_count(N));
    // Gamma(N): orbits = surjections / {+-1}
    for (int64_t N : {3, 4, 5}) {
        int64_t surj = N * N;
        for (auto [p, e] : factorize(N)) surj = surj / (p * p) * (p * p - 1);
        CHECK(static_cast<int64_t>(cusp_orbits(LevelSpec::gamma(N)).size()) == surj / 2);
    }
}

TEST_CASE("orbits partition the surjections and closure matches one-step action") {
    for (int64_t N : {5, 6, 8, 9, 12}) {
        LevelSpec spec = LevelSpec::gamma1(N);
        auto orbits = cusp_orbits(spec);
        SubgroupBar bar = build_subgroup(spec);
        std::set<std::pair<int64_t, int64_t>> all;
        int64_t L = spec.level();
        for (const auto& o : orbits)
            for (auto& x : o.representatives) CHECK(all.insert(x).second); // disjoint
        int64_t surj = 0;
        for (int64_t a1 = 0; a1 < L; ++a1)
            for (int64_t a2 = 0; a2 < L; ++a2)
                if (std::gcd(std::gcd(a1, a2), L) == 1) {
                    ++surj;
                    CHECK(all.count({a1, a2}) == 1); // exhaustive
                }
        CHECK(static_cast<int64_t>(all.size()) == surj);
        // full-action oracle: the BFS closure equals the one-step orbit of any member
        for (const auto& o : orbits) {
            auto [a1, a2] = o.least();
            std::set<std::pair<int64_t, int64_t>> one_step;
            for (const auto& g : bar.elements) {
                one_step.insert({mod_floor(a1 * g[0] + a2 * g[2], L), mod_floor(a1 * g[1] + a2 * g[3], L)});
                one_step.insert({mod_floor(-(a1 * g[0] + a2 * g[2]), L), mod_floor(-(a1 * g[1] + a2 * g[3]), L)});
            }
            CHECK(one_step == std::set<std::pair<int64_t, int64_t>>(o.representatives.begin(),
                                                                    o.representatives.end()));
        }
    }
}

TEST_CASE("rational cusp counts: paper examples") {
    CHECK(rational_cusp_count(LevelSpec::gamma1(5), 11) == 4);
    CHECK(rational_cusp_count(LevelSpec::gamma1(5), 7) == 2);
    CHECK(rational_cusp_count(LevelSpec::gamma1(9), 2) == 3);
    CHECK(rational_cusp_count(LevelSpec::gamma1(9), 19) == 8);
    for (int64_t q : {3, 5, 7, 9, 11, 13})
        CHECK(rational_cusp_count(LevelSpec::gamma1(4), q) == 3);
    CHECK_THROWS_AS(rational_cusp_count(LevelSpec::gamma1(5), 10), coprimality_error);
}

TEST_CASE("closed forms for prime and twice-prime levels, q <= 200") {
    for (int64_t N : {5, 7, 11, 13}) {
        for (int64_t q = 2; q <= 200; ++q) {
            if (std::gcd(q, N) != 1) continue;
            int64_t r = mod_floor(q, N);
            int64_t expect = (r == 1 || r == N - 1) ? (N - 1) : (N - 1) / 2;
            CHECK(rational_cusp_count(LevelSpec::gamma1(N), q) == expect);
        }
    }
    for (int64_t twol : {6, 10, 14}) {
        int64_t ell = twol / 2;
        for (int64_t q = 2; q <= 200; ++q) {
            if (std::gcd(q, twol) != 1) continue;
            int64_t r = mod_floor(q, twol);
            int64_t expect = (r == 1 || r == twol - 1) ? 2 * (ell - 1) : (ell - 1);
            CHECK(rational_cusp_count(LevelSpec::gamma1(twol), q) == expect);
        }
    }
}

TEST_CASE("rational <= orbits <= 2 * index") {
    for (int64_t N : {5, 7, 9, 12}) {
        LevelSpec spec = LevelSpec::gamma1(N);
        auto orbits = cusp_orbits(spec);
        auto [index, e] = index_and_e(spec);
        for (int64_t q : {2, 5, 11, 13, 199}) {
            if (std::gcd(q, N) != 1) continue;
            int64_t r = rational_cusp_count(spec, q);
            CHECK(r <= static_cast<int64_t>(orbits.size()));
            CHECK(static_cast<int64_t>(orbits.size()) <= 2 * index);
        }
    }
}

TEST_CASE("level ceiling") {
    CHECK_THROWS_AS(build_subgroup(LevelSpec::gamma1(31)), resource_limit_error);
}
