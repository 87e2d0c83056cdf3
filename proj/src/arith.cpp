#include "ecstat/arith.hpp"

#include <algorithm>
#include <numeric>

#include "ecstat/errors.hpp"

namespace ecstat {

int64_t mod_floor(int64_t a, int64_t m) {
    int64_t r = a % m;
    return r < 0 ? r + m : r;
}

int64_t mul_mod(int64_t a, int64_t b, int64_t m) {
    return static_cast<int64_t>((static_cast<__int128>(a) * b) % m);
}

int64_t pow_mod(int64_t a, int64_t e, int64_t m) {
    if (m == 1) return 0;
    int64_t r = 1;
    a = mod_floor(a, m);
    while (e > 0) {
        if (e & 1) r = mul_mod(r, a, m);
        a = mul_mod(a, a, m);
        e >>= 1;
    }
    return r;
}

int64_t inv_mod(int64_t a, int64_t m) {
    int64_t g = m, x = 0, x1 = 1, a1 = mod_floor(a, m);
    while (a1 != 0) {
        int64_t q = g / a1;
        g -= q * a1;
        std::swap(g, a1);
        x -= q * x1;
        std::swap(x, x1);
    }
    if (g != 1) throw bad_input_error("inv_mod: not a unit");
    return mod_floor(x, m);
}

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return n == p;
    }
    int64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        int64_t x = pow_mod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = mul_mod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::vector<std::pair<int64_t, int>> factorize(int64_t n) {
    std::vector<std::pair<int64_t, int>> out;
    for (int64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (n % p == 0) {
            int e = 0;
            while (n % p == 0) n /= p, ++e;
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<int64_t> divisors(int64_t n) {
    std::vector<int64_t> out{1};
    for (auto [p, e] : factorize(n)) {
        size_t sz = out.size();
        int64_t pe = 1;
        for (int i = 1; i <= e; ++i) {
            pe *= p;
            for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

int64_t euler_phi(int64_t n) {
    int64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p - 1);
    return r;
}

int64_t dedekind_psi(int64_t n) {
    int64_t r = n;
    for (auto [p, e] : factorize(n)) r = r / p * (p + 1);
    return r;
}

int64_t sigma_divisor_sum(int64_t n) {
    int64_t r = 1;
    for (auto [p, e] : factorize(n)) {
        int64_t s = 1, pe = 1;
        for (int i = 0; i < e; ++i) pe *= p, s += pe;
        r *= s;
    }
    return r;
}

int64_t divisor_count(int64_t n) {
    int64_t r = 1;
    for (auto [p, e] : factorize(n)) r *= e + 1;
    return r;
}

int64_t signed_phi(int64_t n) {
    int64_t r = n;
    for (auto [p, e] : factorize(n)) r *= -(p - 1);
    return r;
}

std::pair<int64_t, int64_t> crt(int64_t r1, int64_t m1, int64_t r2, int64_t m2) {
    int64_t g = std::gcd(m1, m2);
    if (mod_floor(r1 - r2, g) != 0) throw bad_input_error("crt: incompatible congruences");
    int64_t l = m1 / g * m2;
    // x = r1 + m1 * t, with m1 * t = r2 - r1 mod m2
    int64_t t = mul_mod(mod_floor((r2 - r1) / g, m2 / g), inv_mod(m1 / g, m2 / g), m2 / g);
    int64_t x = mod_floor(mod_floor(r1, l) + mul_mod(mod_floor(m1, l), t, l), l);
    return {x, l};
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    if (n <= std::numeric_limits<int64_t>::max()) return is_prime(static_cast<int64_t>(n));
    for (int64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        if (n % p == 0) return false;
    }
    Int d = n - 1;
    int s = 0;
    while ((d & 1) == 0) d >>= 1, ++s;
    for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
        Int x = boost::multiprecision::powm(Int(a), d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int r = 1; r < s; ++r) {
            x = x * x % n;
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

namespace {

Int pollard_rho(const Int& n) {
    if (n % 2 == 0) return 2;
    for (Int c = 1;; ++c) {
        Int x = 2, y = 2, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            d = boost::multiprecision::gcd(x >= y ? x - y : y - x, n);
        }
        if (d != n) return d;
    }
}

void factor_rec(Int n, std::vector<Int>& primes) {
    if (n == 1) return;
    if (is_prime(n)) {
        primes.push_back(n);
        return;
    }
    Int d = pollard_rho(n);
    factor_rec(d, primes);
    factor_rec(n / d, primes);
}

} // namespace

std::vector<std::pair<Int, int>> factorize(const Int& n) {
    Int m = n;
    std::vector<Int> primes;
    for (int64_t p = 2; p < 100000 && Int(p) * p <= m; p += (p == 2 ? 1 : 2)) {
        while (m % p == 0) {
            primes.push_back(p);
            m /= p;
        }
    }
    factor_rec(m, primes);
    std::sort(primes.begin(), primes.end());
    std::vector<std::pair<Int, int>> out;
    for (const Int& p : primes) {
        if (!out.empty() && out.back().first == p)
            ++out.back().second;
        else
            out.emplace_back(p, 1);
    }
    return out;
}

} // namespace ecstat
