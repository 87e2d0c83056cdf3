#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ecstat/torsion_families.hpp"

namespace ecstat {

// Fejer-type pair: phi(x) = sin^2(pi sigma x) / (2 pi x)^2 with Fourier
// transform phi_hat(u) = (sigma - |u|)/4 supported in [-sigma, sigma].
struct TestFunction {
    double sigma;
    explicit TestFunction(double s);
    double phi(double x) const;
    double phi_hat(double u) const;
    double phi0() const { return sigma * sigma / 4; }
    double phi_hat0() const { return sigma / 4; }
};

inline constexpr int64_t kSieveCeiling = 100'000'000;

// primes up to n, cached monotone sieve
const std::vector<int64_t>& primes_up_to(int64_t n, int64_t ceiling = kSieveCeiling);

// theta(t) = sum_{p <= t} log p
double chebyshev_theta(double t, int64_t ceiling = kSieveCeiling);

// (2/log X) sum_{p <= X^{sigma/2}} (log p / p) phi_hat(2 log p / log X),
// which tends to phi(0)/2
double s2_analytic_sum(double X, double sigma, int64_t ceiling = kSieveCeiling);

struct ExplicitFormulaReport {
    double X = 0;
    double sigma = 0;
    double S1 = 0, S2 = 0;
    double predicted_S2_main = 0; // -phi(0)/2
    double rank_bound = 0;
    std::map<std::string, double> budget_terms;
};

// The finite prime sums of the explicit formula over a generated family:
// S1 with phi_hat(log p / log X), S2 with phi_hat(2 log p / log X), using
// a_hat(p) = a/sqrt(p) for good reduction and +-1/sqrt(p) at multiplicative
// primes; a_hat(p^2) = a_hat(p)^2 - 2 resp. 1/p.
ExplicitFormulaReport s1_s2_empirical(const FamilyParametrization& param,
                                      const FamilyResult& family, double X, double sigma);

} // namespace ecstat
