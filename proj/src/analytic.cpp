#include "ecstat/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

TestFunction::TestFunction(double s) : sigma(s) {
    if (s <= 0) throw bad_input_error("TestFunction: sigma must be positive");
}

double TestFunction::phi(double x) const {
    if (x == 0) return phi0();
    double s = std::sin(std::numbers::pi * sigma * x);
    double d = 2 * std::numbers::pi * x;
    return s * s / (d * d);
}

double TestFunction::phi_hat(double u) const {
    double a = std::abs(u);
    if (a >= sigma) return 0;
    return 0.5 * (sigma / 2 - a / 2);
}

namespace {

std::vector<int64_t> g_primes;
int64_t g_sieved_to = 0;

void extend_sieve(int64_t n) {
    if (n <= g_sieved_to) return;
    int64_t target = std::max<int64_t>(n, 1024);
    std::vector<bool> comp(target + 1, false);
    g_primes.clear();
    for (int64_t i = 2; i <= target; ++i) {
        if (comp[i]) continue;
        g_primes.push_back(i);
        for (int64_t j = i * i; j <= target; j += i) comp[j] = true;
    }
    g_sieved_to = target;
}

} // namespace

const std::vector<int64_t>& primes_up_to(int64_t n, int64_t ceiling) {
    if (n > ceiling)
        throw resource_limit_error("sieve request " + std::to_string(n) + " exceeds ceiling");
    extend_sieve(n);
    return g_primes;
}

double chebyshev_theta(double t, int64_t ceiling) {
    if (t < 2) return 0;
    if (t > double(ceiling)) throw resource_limit_error("chebyshev_theta: t exceeds sieve ceiling");
    const auto& ps = primes_up_to(static_cast<int64_t>(t), ceiling);
    double s = 0;
    for (int64_t p : ps) {
        if (double(p) > t) break;
        s += std::log(double(p));
    }
    return s;
}

double s2_analytic_sum(double X, double sigma, int64_t ceiling) {
    TestFunction f(sigma);
    double logX = std::log(X);
    double cut = std::pow(X, sigma / 2);
    if (cut > double(ceiling)) throw resource_limit_error("s2_analytic_sum: X^{sigma/2} exceeds sieve ceiling");
    double s = 0;
    for (int64_t p : primes_up_to(static_cast<int64_t>(cut) + 1, ceiling)) {
        if (double(p) > cut) break;
        double lp = std::log(double(p));
        s += lp / double(p) * f.phi_hat(2 * lp / logX);
    }
    return 2 / logX * s;
}

ExplicitFormulaReport s1_s2_empirical(const FamilyParametrization& param,
                                      const FamilyResult& family, double X, double sigma) {
    if (!param.level.representable())
        throw bad_input_error("s1_s2_empirical: representable levels only");
    if (family.curves.empty()) throw bad_input_error("s1_s2_empirical: empty family");
    TestFunction f(sigma);
    double logX = std::log(X);
    int64_t cut1 = static_cast<int64_t>(std::pow(X, sigma));
    int64_t cut2 = static_cast<int64_t>(std::pow(X, sigma / 2));
    int64_t n = static_cast<int64_t>(family.curves.size());
    int64_t level6 = 6 * param.level.level();

    double S1 = 0, S2 = 0;
    for (int64_t p : primes_up_to(cut1 + 1)) {
        if (p > cut1) break;
        if (level6 % p == 0) continue;
        double lp = std::log(double(p));
        double w1 = f.phi_hat(lp / logX);
        double w2 = p <= cut2 ? f.phi_hat(2 * lp / logX) : 0;
        if (w1 == 0 && w2 == 0) continue;

        // trace of every reduced pair via the census orbits
        CurveCensus census = build_census(PrimeField(p));
        std::vector<int32_t> trace_of(p * p, std::numeric_limits<int32_t>::min());
        std::vector<int64_t> u4(p), u6(p);
        for (int64_t u = 1; u < p; ++u) {
            int64_t u2 = mul_mod(u, u, p);
            u4[u] = mul_mod(u2, u2, p);
            u6[u] = mul_mod(u4[u], u2, p);
        }
        for (const auto& rec : census.classes)
            for (int64_t u = 1; u < p; ++u)
                trace_of[mul_mod(u4[u], rec.A, p) * p + mul_mod(u6[u], rec.B, p)] =
                    static_cast<int32_t>(rec.trace_a);

        double sum1 = 0, sum2 = 0;
        double sqp = std::sqrt(double(p));
        for (const auto& c : family.curves) {
            int64_t a = mod_floor(static_cast<int64_t>(c.A % p), p);
            int64_t b = mod_floor(static_cast<int64_t>(c.B % p), p);
            if (a == 0 && b == 0)
                throw invariant_violation("additive reduction in representable family at q = " +
                                          std::to_string(p));
            int32_t tr = trace_of[a * p + b];
            if (tr != std::numeric_limits<int32_t>::min()) {
                double ahat = double(tr) / sqp;
                sum1 += ahat;
                sum2 += ahat * ahat - 2;
            } else {
                // multiplicative: split +1, nonsplit -1
                int64_t alpha = mul_mod(mod_floor(-3 * b, p), inv_mod(mod_floor(2 * a, p), p), p);
                bool split = pow_mod(mul_mod(3, alpha, p), (p - 1) / 2, p) == 1;
                sum1 += (split ? 1.0 : -1.0) / sqp;
                sum2 += 1.0 / double(p);
            }
        }
        S1 += lp / sqp * w1 * sum1;
        S2 += lp / double(p) * w2 * sum2;
    }
    S1 *= 2 / (logX * double(n));
    S2 *= 2 / (logX * double(n));

    ExplicitFormulaReport rep;
    rep.X = X;
    rep.sigma = sigma;
    rep.S1 = S1;
    rep.S2 = S2;
    rep.predicted_S2_main = -f.phi0() / 2;

    // residual budget: the terms the explicit formula absorbs into O(1/log X)
    double budget_powers = 0; // prime powers k >= 3, |a_hat(p^k)| <= 2 p^{-k/2}
    for (int64_t p : primes_up_to(1000)) {
        double lp = std::log(double(p));
        double tail = 2 * lp / (std::pow(double(p), 1.5) * (1 - 1 / std::sqrt(double(p))));
        budget_powers += tail * (sigma / 4);
    }
    budget_powers *= 2 / logX;
    double budget_digamma = 4.0 / logX; // digamma integral, |Gamma'/Gamma| bound on the strip
    double budget_conductor = 1.0 / logX; // log A_E <= 12 log X + O(1)
    rep.budget_terms["higher_prime_powers"] = budget_powers;
    rep.budget_terms["digamma_integral"] = budget_digamma;
    rep.budget_terms["conductor_slack"] = budget_conductor;

    double budget_total = budget_powers + budget_digamma + budget_conductor;
    rep.rank_bound = 12 * f.phi_hat0() / f.phi0() + 0.5 - S1 / f.phi0() -
                     (S2 + f.phi0() / 2) / f.phi0() + budget_total / f.phi0();
    return rep;
}

} // namespace ecstat
