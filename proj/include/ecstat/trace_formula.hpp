#pragma once

#include <cstdint>

#include "ecstat/ff_curves.hpp"
#include "ecstat/level_fibers.hpp"
#include "ecstat/numeric.hpp"

namespace ecstat {

// Parameters of the geometric side for S_k(Gamma(n1, lambda)),
// Gamma(N,M) = Gamma_1(N) n Gamma_0(NM). q = p^v; the artifact works at
// v = 1 (q prime) with the diamond class d fixed to 1.
struct TraceParams {
    int64_t n1;
    int64_t lambda;
    int64_t k;
    int64_t p;
    int v = 1;
    int64_t d = 1;

    Int q() const { return ipow(Int(p), static_cast<unsigned>(v)); }
};

struct GeometricTerms {
    Rat T_id, T_hyp, T_dual;
};

struct ArithmeticFunctions {
    int64_t phi_euler;
    int64_t psi;
    int64_t sigma;
    int64_t phi_signed;
};

// The normalized Chebyshev value U_j(a, q) = q^{j/2} U_j(a / 2 sqrt q):
// U_0 = 1, U_1 = a, U_{j+1} = a U_j - q U_{j-1}.
Int chebyshev_U(int j, int64_t a, int64_t q);

ArithmeticFunctions arithmetic_functions(int64_t n);

GeometricTerms geometric_terms(const TraceParams& params);

// psi(n1^2/lambda^2) phi(n1/lambda) / psi(n1^2)
Rat trace_combination_coefficient(int64_t n1, int64_t lambda);

struct TraceReport {
    TraceParams params;
    AbelianRank2 A;
    Rat expectation;   // E_q(U_{k-2}(a_E, q) Phi_A), brute force side
    Rat solved_trace;  // Tr(T_q <1> | S_k(Gamma(n1, n2)))
    bool integer_verdict = false;
    bool deligne_verdict = false;
};

// Inverts the single-term identity for Tr(T_q <1> | S_k(Gamma(n1, n2))).
// Requires (q - 1, n1) = n2 so the divisor sum over nu collapses to nu = 1;
// other configurations are rejected with a diagnostic.
TraceReport solve_trace(const TraceParams& params, const CurveCensus& census,
                        const AbelianRank2& A);

// b(n1, n2, nu) from the weight-3 first-moment expansion.
Rat b_constants(int64_t n1, int64_t n2, int64_t nu);

} // namespace ecstat
