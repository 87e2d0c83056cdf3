#pragma once

#include <cstdint>
#include <string>
#include <utility>

#include "ecstat/errors.hpp"

namespace ecstat {

// Gamma_1(M,N) = Gamma(M) n Gamma_1(M*N). Gamma_1(N) is (M,N)=(1,N) and
// Gamma(N) is (M,N)=(N,1). The level is M*N.
struct LevelSpec {
    int64_t M, N;

    LevelSpec(int64_t M_, int64_t N_) : M(M_), N(N_) {
        if (M < 1 || N < 1) throw bad_input_error("LevelSpec: M, N must be positive");
    }

    int64_t level() const { return M * N; }
    // invariant factors of the embedded torsion module Z/MN x Z/M
    std::pair<int64_t, int64_t> torsion_group() const { return {M * N, M}; }
    bool representable() const { return M * N >= 5 || M >= 3; }

    std::string token() const {
        if (M == 1) return "G1-" + std::to_string(N);
        if (N == 1) return "G-" + std::to_string(M);
        return "G1-" + std::to_string(M) + "-" + std::to_string(N);
    }

    static LevelSpec gamma1(int64_t N) { return LevelSpec(1, N); }
    static LevelSpec gamma(int64_t N) { return LevelSpec(N, 1); }

    // tokens: G1-<N>, G-<N>, G1-<M>-<N>
    static LevelSpec parse(const std::string& tok);

    bool operator==(const LevelSpec& o) const { return M == o.M && N == o.N; }
};

inline LevelSpec LevelSpec::parse(const std::string& tok) {
    auto num = [&](const std::string& s) -> int64_t {
        try {
            size_t pos = 0;
            int64_t v = std::stoll(s, &pos);
            if (pos != s.size() || v < 1) throw std::invalid_argument(s);
            return v;
        } catch (const std::exception&) {
            throw bad_input_error("bad level token: " + tok);
        }
    };
    if (tok.rfind("G1-", 0) == 0) {
        std::string rest = tok.substr(3);
        auto dash = rest.find('-');
        if (dash == std::string::npos) return gamma1(num(rest));
        return LevelSpec(num(rest.substr(0, dash)), num(rest.substr(dash + 1)));
    }
    if (tok.rfind("G-", 0) == 0) return gamma(num(tok.substr(2)));
    throw bad_input_error("bad level token: " + tok + " (want G1-<N>, G-<N>, or G1-<M>-<N>)");
}

} // namespace ecstat
