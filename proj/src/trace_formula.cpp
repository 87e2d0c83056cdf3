#include "ecstat/trace_formula.hpp"

#include <numeric>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

Int chebyshev_U(int j, int64_t a, int64_t q) {
    if (j < 0) throw bad_input_error("chebyshev_U: j must be nonnegative");
    Int prev = 1, cur = a;
    if (j == 0) return prev;
    for (int i = 1; i < j; ++i) {
        Int next = a * cur - q * prev;
        prev = cur;
        cur = next;
    }
    return cur;
}

ArithmeticFunctions arithmetic_functions(int64_t n) {
    if (n < 1) throw bad_input_error("arithmetic_functions: n must be positive");
    return {euler_phi(n), dedekind_psi(n), sigma_divisor_sum(n), signed_phi(n)};
}

namespace {

// delta_c(x, y): indicator of x = y mod c
int delta_mod(int64_t c, int64_t x, int64_t y) { return mod_floor(x - y, c) == 0 ? 1 : 0; }

// sigma(p^v)
int64_t sigma_prime_power(int64_t p, int v) {
    int64_t s = 1, pe = 1;
    for (int i = 0; i < v; ++i) pe *= p, s += pe;
    return s;
}

} // namespace

Rat trace_combination_coefficient(int64_t n1, int64_t lambda) {
    if (n1 % lambda != 0) throw bad_input_error("trace coefficient: lambda must divide n1");
    return Rat(dedekind_psi((n1 / lambda) * (n1 / lambda)) * euler_phi(n1 / lambda),
               dedekind_psi(n1 * n1));
}

GeometricTerms geometric_terms(const TraceParams& params) {
    int64_t n1 = params.n1, lam = params.lambda, k = params.k, p = params.p, d = params.d;
    int v = params.v;
    if (n1 % lam != 0) throw bad_input_error("geometric_terms: lambda must divide n1");
    if (k < 2) throw bad_input_error("geometric_terms: weight k >= 2 required");
    if (!is_prime(p)) throw bad_input_error("geometric_terms: p must be prime");
    if (std::gcd(p, n1 * lam) != 1)
        throw coprimality_error("geometric_terms: gcd(q, n1*lambda) must be 1");

    int sign_k = (k % 2 == 0) ? 1 : -1;
    GeometricTerms out{Rat(0), Rat(0), Rat(0)};

    // T_id: vanishes unless q is a perfect square (delta_c(q^{1/2}, .) = 0
    // convention otherwise)
    if (v % 2 == 0) {
        int64_t dinv = inv_mod(d, n1);
        int64_t sq = pow_mod(p, v / 2, n1);
        int id_delta = delta_mod(n1, sq, dinv) + sign_k * delta_mod(n1, sq, mod_floor(-dinv, n1));
        if (id_delta != 0) {
            Rat qpow = rpow(Rat(p), static_cast<unsigned>(v)); // q
            // q^{k/2 - 1} with k, v integers: exponent v*(k-2)/2 of p
            int64_t num = v * (k - 2);
            if (num % 2 != 0) throw invariant_violation("T_id: non-integral power of p");
            Rat qk = num >= 0 ? Rat(ipow(Int(p), static_cast<unsigned>(num / 2)))
                              : Rat(1, ipow(Int(p), static_cast<unsigned>(-num / 2)));
            out.T_id = Rat(k - 1, 24) * qk * dedekind_psi(n1 * lam) * id_delta;
        }
    }

    // T_hyp
    Rat hyp = 0;
    for (int i = 0; i <= v; ++i) {
        // min(p^i, p^{v-i})^{k-1}
        Int minpow = ipow(Int(p), static_cast<unsigned>(std::min(i, v - i)));
        Int weight = ipow(minpow, static_cast<unsigned>(k - 1));
        for (int64_t tau : divisors(n1 * lam)) {
            int64_t g = std::gcd(tau, n1 * lam / tau);
            // g | p^i - p^{v-i}
            if (mod_floor(pow_mod(p, i, g) - pow_mod(p, v - i, g), g) != 0) continue;
            int64_t lg = std::gcd(lam, g);
            int64_t mod_y = n1 * lam / g; // y_i lives in (Z/(n1 lam / g))^x
            auto [y, l] = crt(pow_mod(p, i, tau), tau, pow_mod(p, v - i, n1 * lam / tau), n1 * lam / tau);
            if (l != mod_y) throw invariant_violation("T_hyp: CRT modulus mismatch");
            if (std::gcd(y, mod_y) != 1) throw invariant_violation("T_hyp: y_i not a unit");
            int64_t c = n1 * lg / g;
            int64_t dinv_c = inv_mod(d, c);
            int deltas = delta_mod(c, y, dinv_c) + sign_k * delta_mod(c, y, mod_floor(-dinv_c, c));
            if (deltas == 0) continue;
            hyp += Rat(weight) * Rat(euler_phi(g) * euler_phi(n1 * lg / g), euler_phi(n1)) * deltas;
        }
    }
    out.T_hyp = hyp / 4;

    // T_dual
    if (k == 2) out.T_dual = Rat(sigma_prime_power(p, v), euler_phi(n1));
    return out;
}

TraceReport solve_trace(const TraceParams& params, const CurveCensus& census,
                        const AbelianRank2& A) {
    int64_t n1 = A.m1, n2 = A.m2, k = params.k, q = params.p;
    if (params.v != 1) throw bad_input_error("solve_trace: only v = 1 (q prime) supported");
    if (params.n1 != n1 || params.lambda != n2)
        throw bad_input_error("solve_trace: params must carry (n1, lambda) = invariant factors of A");
    if (census.p != q) throw bad_input_error("solve_trace: census prime mismatch");
    if (std::gcd(q, n1) != 1) throw coprimality_error("solve_trace: gcd(q, n1) must be 1");
    if ((q - 1) % n2 != 0)
        throw bad_input_error("solve_trace: q != 1 mod n2, the expectation vanishes identically");
    if (std::gcd(q - 1, n1) != n2)
        throw bad_input_error("solve_trace: (q-1, n1) = " + std::to_string(std::gcd(q - 1, n1)) +
                              " != n2 = " + std::to_string(n2) +
                              "; multi-nu configurations are out of validated scope");

    TraceReport rep{params, A, Rat(0), Rat(0), false, false};
    rep.expectation = expectation_phi(
        A, census, [&](int64_t a) { return chebyshev_U(static_cast<int>(k - 2), a, q); });

    // E * q * phi(n1/n2) = phi_signed(1) * coef * (-T_trace + T_id - T_hyp + T_dual)
    // with the v < 2 correction term T_{n1, n2 nu}(q/p^2, p) set to 0.
    GeometricTerms terms = geometric_terms(params);
    Rat coef = trace_combination_coefficient(n1, n2);
    Rat t_trace = terms.T_id - terms.T_hyp + terms.T_dual -
                  rep.expectation * q * euler_phi(n1 / n2) / coef;
    rep.solved_trace = t_trace * euler_phi(n1);

    rep.integer_verdict = is_integer(rep.solved_trace);
    // |Tr| <= (k-1)/12 phi(N) psi(NM) d(q) q^{(k-1)/2} with N = n1, M = n2;
    // compare squares to stay rational
    Rat bound = Rat(k - 1, 12) * euler_phi(n1) * dedekind_psi(n1 * n2) * divisor_count(q);
    rep.deligne_verdict =
        rep.solved_trace * rep.solved_trace <= bound * bound * ipow(Int(q), static_cast<unsigned>(k - 1));
    return rep;
}

Rat b_constants(int64_t n1, int64_t n2, int64_t nu) {
    if (n1 % n2 != 0 || (n1 / n2) % nu != 0)
        throw bad_input_error("b_constants: need nu | n1/n2");
    int64_t m = n2 * nu;
    return Rat(-signed_phi(nu)) * dedekind_psi((n1 / m) * (n1 / m)) * euler_phi(n1 / m) /
           (Rat(dedekind_psi(n1 * n1)) * euler_phi(n1 / n2) * euler_phi(n1));
}

} // namespace ecstat
