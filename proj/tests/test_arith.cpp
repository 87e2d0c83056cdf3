#include <doctest.h>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

using namespace ecstat;

TEST_CASE("multiplicative functions") {
    CHECK(euler_phi(1) == 1);
    CHECK(euler_phi(12) == 4);
    CHECK(dedekind_psi(6) == 12);
    CHECK(dedekind_psi(1) == 1);
    CHECK(sigma_divisor_sum(7) == 8);
    CHECK(signed_phi(1) == 1);
    CHECK(signed_phi(2) == -2);
    CHECK(signed_phi(6) == 12);
    CHECK(divisor_count(12) == 6);
}

TEST_CASE("primality") {
    CHECK(is_prime(int64_t(2)));
    CHECK(is_prime(int64_t(5003)));
    CHECK(!is_prime(int64_t(5001)));
    CHECK(!is_prime(int64_t(1)));
    CHECK(is_prime(int64_t(1000003)));
    CHECK(is_prime(Int("1000000000000000003")));
}

TEST_CASE("crt") {
    auto [x, l] = crt(2, 3, 3, 5);
    CHECK(l == 15);
    CHECK(x % 3 == 2);
    CHECK(x % 5 == 3);
    auto [y, l2] = crt(1, 4, 3, 6); // gcd 2, 1 - 3 = -2 divisible
    CHECK(l2 == 12);
    CHECK(y % 4 == 1);
    CHECK(y % 6 == 3);
    CHECK_THROWS_AS(crt(1, 4, 2, 6), bad_input_error);
}

TEST_CASE("big integer factorization") {
    auto f = factorize(Int("600851475143"));
    Int prod = 1;
    for (auto& [p, e] : f)
        for (int i = 0; i < e; ++i) prod *= p;
    CHECK(prod == Int("600851475143"));
    CHECK(f.back().first == 6857);
}
