#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ecstat/numeric.hpp"

namespace ecstat {

int64_t mod_floor(int64_t a, int64_t m);
int64_t mul_mod(int64_t a, int64_t b, int64_t m);
int64_t pow_mod(int64_t a, int64_t e, int64_t m);
int64_t inv_mod(int64_t a, int64_t m); // throws bad_input_error if not a unit

bool is_prime(int64_t n); // deterministic Miller-Rabin, full 64-bit range

// prime factorization of n >= 1, (prime, exponent) pairs in increasing order
std::vector<std::pair<int64_t, int>> factorize(int64_t n);
std::vector<int64_t> divisors(int64_t n); // sorted

int64_t euler_phi(int64_t n);
int64_t dedekind_psi(int64_t n);       // n * prod_{p|n} (1 + 1/p)
int64_t sigma_divisor_sum(int64_t n);  // sum of divisors
int64_t divisor_count(int64_t n);
int64_t signed_phi(int64_t n);         // n * prod_{p|n} (-euler_phi(p))

// x = r1 mod m1, x = r2 mod m2; requires gcd(m1,m2) | r1-r2.
// Returns (x, lcm(m1,m2)).
std::pair<int64_t, int64_t> crt(int64_t r1, int64_t m1, int64_t r2, int64_t m2);

// factorization of arbitrary-precision integers (trial division + Pollard rho)
bool is_prime(const Int& n);
std::vector<std::pair<Int, int>> factorize(const Int& n);

} // namespace ecstat
