#include "ecstat/torsion_families.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ecstat/arith.hpp"
#include "ecstat/cusp_census.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

namespace {

// ---- univariate polynomials over Q, dense low-to-high ----

struct UPoly {
    std::vector<Rat> c;

    void trim() {
        while (!c.empty() && c.back() == 0) c.pop_back();
    }
    int deg() const { return static_cast<int>(c.size()) - 1; } // -1 for zero
    bool zero() const { return c.empty(); }
    Rat eval(const Rat& t) const {
        Rat v = 0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * t + *it;
        return v;
    }
    static UPoly constant(const Rat& v) {
        UPoly p;
        if (v != 0) p.c = {v};
        return p;
    }
    static UPoly monomial(const Rat& v, int d) {
        UPoly p;
        p.c.assign(d + 1, Rat(0));
        p.c[d] = v;
        p.trim();
        return p;
    }
};

UPoly operator+(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] += b.c[i];
    r.trim();
    return r;
}

UPoly operator-(const UPoly& a, const UPoly& b) {
    UPoly r;
    r.c.resize(std::max(a.c.size(), b.c.size()), Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] += a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] -= b.c[i];
    r.trim();
    return r;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.zero() || b.zero()) return {};
    UPoly r;
    r.c.assign(a.c.size() + b.c.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c.size(); ++i)
        for (size_t j = 0; j < b.c.size(); ++j) r.c[i + j] += a.c[i] * b.c[j];
    r.trim();
    return r;
}

UPoly operator*(const UPoly& a, const Rat& s) {
    if (s == 0) return {};
    UPoly r = a;
    for (auto& v : r.c) v *= s;
    return r;
}

// division with remainder over Q
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
    if (b.zero()) throw bad_input_error("poly division by zero");
    UPoly q, r = a;
    if (r.deg() >= b.deg()) q.c.assign(r.deg() - b.deg() + 1, Rat(0));
    while (!r.zero() && r.deg() >= b.deg()) {
        Rat f = r.c.back() / b.c.back();
        int shift = r.deg() - b.deg();
        q.c[shift] = f;
        for (size_t i = 0; i < b.c.size(); ++i) r.c[shift + i] -= f * b.c[i];
        r.trim();
    }
    q.trim();
    return {q, r};
}

UPoly poly_gcd(UPoly a, UPoly b) {
    while (!b.zero()) {
        auto [q, r] = divmod(a, b);
        a = b;
        b = r;
    }
    if (!a.zero()) a = a * (Rat(1) / a.c.back()); // monic
    return a;
}

// ---- rational functions over Q ----

struct RatFunc {
    UPoly num, den; // den nonzero, reduced, monic

    static RatFunc of(UPoly n, UPoly d) {
        if (d.zero()) throw bad_input_error("RatFunc: zero denominator");
        UPoly g = poly_gcd(n, d);
        if (g.deg() > 0) {
            n = divmod(n, g).first;
            d = divmod(d, g).first;
        }
        Rat lead = d.c.back();
        n = n * (Rat(1) / lead);
        d = d * (Rat(1) / lead);
        return {n, d};
    }
    static RatFunc poly(UPoly n) { return {n, UPoly::constant(1)}; }
    static RatFunc constant(const Rat& v) { return {UPoly::constant(v), UPoly::constant(1)}; }
    bool zero() const { return num.zero(); }
};

RatFunc operator+(const RatFunc& a, const RatFunc& b) {
    return RatFunc::of(a.num * b.den + b.num * a.den, a.den * b.den);
}
RatFunc operator-(const RatFunc& a, const RatFunc& b) {
    return RatFunc::of(a.num * b.den - b.num * a.den, a.den * b.den);
}
RatFunc operator*(const RatFunc& a, const RatFunc& b) {
    return RatFunc::of(a.num * b.num, a.den * b.den);
}
RatFunc operator*(const RatFunc& a, const Rat& s) { return RatFunc::of(a.num * s, a.den); }

// ---- Sylvester resultant over Q (actual degrees) ----

Rat resultant(const UPoly& a, const UPoly& b) {
    int m = a.deg(), n = b.deg();
    if (m < 0 || n < 0) return 0;
    if (m == 0) return rpow(Rat(a.c[0]), static_cast<unsigned>(n));
    if (n == 0) return rpow(Rat(b.c[0]), static_cast<unsigned>(m));
    int sz = m + n;
    std::vector<std::vector<Rat>> mat(sz, std::vector<Rat>(sz, Rat(0)));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= m; ++j) mat[i][i + j] = a.c[m - j];
    for (int i = 0; i < m; ++i)
        for (int j = 0; j <= n; ++j) mat[n + i][i + j] = b.c[n - j];
    Rat det = 1;
    for (int col = 0; col < sz; ++col) {
        int piv = -1;
        for (int r = col; r < sz; ++r)
            if (mat[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) return 0;
        if (piv != col) {
            std::swap(mat[piv], mat[col]);
            det = -det;
        }
        det *= mat[col][col];
        Rat inv = Rat(1) / mat[col][col];
        for (int r = col + 1; r < sz; ++r) {
            if (mat[r][col] == 0) continue;
            Rat f = mat[r][col] * inv;
            for (int cc = col; cc < sz; ++cc) mat[r][cc] -= f * mat[col][cc];
        }
    }
    return det;
}

// ---- Tate normal form tables ----

struct TateData {
    RatFunc b, c;
};

UPoly up(std::initializer_list<Rat> lowtohigh) {
    UPoly p;
    p.c = lowtohigh;
    p.trim();
    return p;
}

TateData tate_relations(int64_t N) {
    UPoly one = UPoly::constant(1);
    UPoly t = UPoly::monomial(1, 1);
    switch (N) {
        case 5:
            return {RatFunc::poly(t), RatFunc::poly(t)};
        case 6:
            return {RatFunc::poly(t * t + t), RatFunc::poly(t)};
        case 7:
            return {RatFunc::poly(t * t * (t - one)), RatFunc::poly(t * (t - one))};
        case 8: {
            UPoly b = (t * Rat(2) - one) * (t - one);
            return {RatFunc::poly(b), RatFunc::of(b, t)};
        }
        case 9: {
            UPoly c = t * t * (t - one);
            UPoly b = c * (t * (t - one) + one);
            return {RatFunc::poly(b), RatFunc::poly(c)};
        }
        case 10: {
            UPoly u = t * t - t * Rat(3) + one;
            UPoly core = t * (t - one) * (t * Rat(2) - one);
            return {RatFunc::of(core * t * t, u * u), RatFunc::of(core * Rat(-1), u)};
        }
        case 12: {
            UPoly d1 = t - one;
            UPoly core = t * (t * Rat(2) - one) * (t * t * Rat(3) - t * Rat(3) + one);
            UPoly extra = t * t * Rat(2) - t * Rat(2) + one;
            return {RatFunc::of(core * extra, d1 * d1 * d1 * d1), RatFunc::of(core * Rat(-1), d1 * d1 * d1)};
        }
        default:
            throw bad_input_error("tate_relations: unsupported N = " + std::to_string(N));
    }
}

// strip-candidate factors appearing in the denominators of the tables
std::vector<UPoly> strip_catalog() {
    UPoly one = UPoly::constant(1);
    UPoly t = UPoly::monomial(1, 1);
    return {t,
            t - one,
            t * Rat(2) - one,
            t * t - t * Rat(3) + one,
            t * t * Rat(3) - t * Rat(3) + one,
            t * t * Rat(2) - t * Rat(2) + one};
}

bool divides(const UPoly& d, const UPoly& a) {
    if (a.zero()) return true;
    return divmod(a, d).second.zero();
}

Int lcm_int(const Int& a, const Int& b) { return a / boost::multiprecision::gcd(a, b) * b; }

struct UnivariateBuild {
    UPoly F, G;    // integer-coefficient cleared numerators for (A, B)
    RatFunc mu;    // scaling with (F, G) = (mu^4 A0, mu^6 B0)
    int64_t e;     // reduced degree after homogenization
};

UnivariateBuild clear_and_reduce(const RatFunc& A0, const RatFunc& B0) {
    // lambda = den(A0) * den(B0) makes lambda^4 A0 and lambda^6 B0 polynomial
    UPoly lam = A0.den * B0.den;
    // lam^4 * A0 = num_A * den_A^3 * den_B^4, lam^6 * B0 = num_B * den_A^6 * den_B^5
    UPoly dA2 = A0.den * A0.den, dB2 = B0.den * B0.den;
    UPoly F = A0.num * (A0.den * dA2) * (dB2 * dB2);
    UPoly G = B0.num * (dA2 * dA2 * dA2) * (dB2 * dB2 * B0.den);
    RatFunc mu = RatFunc::poly(lam);

    // clear integer denominators with a single scalar
    Int D = 1;
    for (const auto& v : F.c) D = lcm_int(D, rat_den(v));
    for (const auto& v : G.c) D = lcm_int(D, rat_den(v));
    F = F * Rat(ipow(D, 4));
    G = G * Rat(ipow(D, 6));
    mu = mu * Rat(D);

    // strip polynomial factors pi with pi^4 | F and pi^6 | G
    for (const auto& pi : strip_catalog()) {
        while (true) {
            UPoly f1 = F, g1 = G;
            bool ok = true;
            for (int i = 0; i < 4 && ok; ++i) {
                if (!divides(pi, f1)) ok = false;
                else f1 = divmod(f1, pi).first;
            }
            for (int i = 0; i < 6 && ok; ++i) {
                if (!divides(pi, g1)) ok = false;
                else g1 = divmod(g1, pi).first;
            }
            if (!ok) break;
            F = f1;
            G = g1;
            mu = mu * RatFunc::of(UPoly::constant(1), pi);
        }
    }

    // strip integer content r with r^4 | content(F), r^6 | content(G)
    Int cf = 0, cg = 0;
    for (const auto& v : F.c) cf = boost::multiprecision::gcd(cf, rat_num(v));
    for (const auto& v : G.c) cg = boost::multiprecision::gcd(cg, rat_num(v));
    cf = boost::multiprecision::abs(cf);
    cg = boost::multiprecision::abs(cg);
    for (const auto& [p, ef] : factorize(cf)) {
        int eg = 0;
        Int x = cg;
        while (x % p == 0) x /= p, ++eg;
        int m = std::min(ef / 4, eg / 6);
        if (m > 0) {
            Int scale = ipow(p, static_cast<unsigned>(m));
            F = F * Rat(Int(1), ipow(scale, 4));
            G = G * Rat(Int(1), ipow(scale, 6));
            mu = mu * Rat(Int(1), scale);
        }
    }

    // homogenization degree: smallest m with 4m >= deg F, 6m >= deg G and
    // no full t1-block left over
    int64_t m = std::max((F.deg() + 3) / 4, (G.deg() + 5) / 6);
    while (m > 1 && 4 * (m - 1) >= F.deg() && 6 * (m - 1) >= G.deg()) --m;
    return {F, G, mu, m};
}

WeightedPoly homogenize(const UPoly& P, int u1, int64_t wdeg) {
    WeightedPoly w;
    w.u0 = 1;
    w.u1 = u1;
    w.wdeg = wdeg;
    for (int a = 0; a <= P.deg(); ++a) {
        if (P.c[a] == 0) continue;
        if (!is_integer(P.c[a])) throw invariant_violation("homogenize: non-integer coefficient");
        w.set(a, rat_num(P.c[a]));
    }
    return w;
}

std::vector<int64_t> defect_primes_of(const WpsMorphism& phi) {
    // a prime can divide both coordinates of the image of a primitive
    // parameter only if it divides the resultant of the dehomogenized pair
    // or the coefficients controlling the boundary charts
    auto dehom = [&](const WeightedPoly& p) {
        UPoly out;
        int64_t maxb = 0;
        for (const auto& [a, c] : p.coef) maxb = std::max(maxb, p.b_exp(a));
        out.c.assign(maxb + 1, Rat(0));
        for (const auto& [a, c] : p.coef) out.c[p.b_exp(a)] += Rat(c);
        out.trim();
        return out; // polynomial in t1 at t0 = 1
    };
    UPoly f1 = dehom(phi.polys[0]), g1 = dehom(phi.polys[1]);
    Rat res = resultant(f1, g1);
    if (res == 0) throw invariant_violation("defect_primes: resultant vanishes (base point)");
    Int acc = boost::multiprecision::abs(rat_num(res));
    auto coef_at = [&](const WeightedPoly& p, int64_t a) {
        auto it = p.coef.find(a);
        return it == p.coef.end() ? Int(0) : it->second;
    };
    // pure-t1 coefficients (the t0 = 0 chart)
    Int c0f = coef_at(phi.polys[0], 0), c0g = coef_at(phi.polys[1], 0);
    if (c0f == 0 && c0g == 0) throw invariant_violation("defect_primes: base point at t0 = 0");
    acc *= boost::multiprecision::gcd(boost::multiprecision::abs(c0f), boost::multiprecision::abs(c0g)) ;
    // leading coefficients of the dehomogenized pair (the chart boundary)
    Int lf = rat_num(f1.c.back()), lg = rat_num(g1.c.back());
    acc *= boost::multiprecision::gcd(boost::multiprecision::abs(lf), boost::multiprecision::abs(lg));
    if (acc == 0) throw invariant_violation("defect_primes: degenerate chart data");
    std::vector<int64_t> primes;
    for (const auto& [p, e] : factorize(acc)) {
        if (p > std::numeric_limits<int64_t>::max()) throw resource_limit_error("defect prime too large");
        primes.push_back(static_cast<int64_t>(p));
    }
    std::sort(primes.begin(), primes.end());
    primes.erase(std::unique(primes.begin(), primes.end()), primes.end());
    return primes;
}

std::vector<Rat> coeffs_of(const UPoly& p) {
    return p.c;
}

} // namespace

FamilyParametrization builtin_parametrization(const LevelSpec& level) {
    if (level.M != 1)
        throw bad_input_error("builtin_parametrization: only Gamma_1(N) families are stored");
    int64_t N = level.N;
    FamilyParametrization param{level, {}, {}, {}, {}};
    param.phi.w = {4, 6};

    if (N == 3) {
        // y^2 + s xy + t y = x^3, weights (1,3)
        param.phi.u = {1, 3};
        param.phi.e = 1;
        WeightedPoly f, g;
        f.u0 = g.u0 = 1;
        f.u1 = g.u1 = 3;
        f.wdeg = 4;
        g.wdeg = 6;
        f.set(4, -27);
        f.set(1, 648);
        g.set(6, 54);
        g.set(3, -1944);
        g.set(0, 11664);
        param.phi.polys = {f, g};
    } else if (N == 4) {
        // y^2 + s xy - t s y = x^3 - t x^2, weights (1,2)
        param.phi.u = {1, 2};
        param.phi.e = 1;
        WeightedPoly f, g;
        f.u0 = g.u0 = 1;
        f.u1 = g.u1 = 2;
        f.wdeg = 4;
        g.wdeg = 6;
        f.set(4, -27);
        f.set(2, -432);
        f.set(0, -432);
        g.set(6, 54);
        g.set(4, 1296);
        g.set(2, 6480);
        g.set(0, -3456);
        param.phi.polys = {f, g};
    } else if (N >= 5 && N <= 12 && N != 11) {
        TateData tate = tate_relations(N);
        RatFunc one = RatFunc::constant(1);
        RatFunc a1 = one - tate.c;
        RatFunc b2 = a1 * a1 - tate.b * Rat(4);
        RatFunc b4 = (tate.b * a1) * Rat(-1);
        RatFunc b6 = tate.b * tate.b;
        RatFunc c4 = b2 * b2 - b4 * Rat(24);
        RatFunc c6 = (b2 * b2 * b2) * Rat(-1) + b2 * b4 * Rat(36) - b6 * Rat(216);
        RatFunc A0 = c4 * Rat(-27);
        RatFunc B0 = c6 * Rat(-54);
        UnivariateBuild built = clear_and_reduce(A0, B0);
        param.phi.u = {1, 1};
        param.phi.e = built.e;
        param.phi.polys = {homogenize(built.F, 1, 4 * built.e), homogenize(built.G, 1, 6 * built.e)};
        // torsion point mapped from (3 b2, -108 b) through the accumulated scaling
        RatFunc X = b2 * (built.mu * built.mu) * Rat(3);
        RatFunc Y = tate.b * (built.mu * built.mu * built.mu) * Rat(-108);
        param.cert_num = {coeffs_of(X.num), coeffs_of(Y.num)};
        param.cert_den = {coeffs_of(X.den), coeffs_of(Y.den)};
    } else {
        throw bad_input_error("builtin_parametrization: unsupported level " + level.token());
    }
    param.phi.validate();

    // the reduced degree must match u0*u1/24 * [SL2(Z) : Gamma]
    auto [index, e_gamma] = index_and_e(level);
    if (Rat(param.phi.e) != e_gamma * param.phi.u[0] * param.phi.u[1])
        throw invariant_violation("builtin_parametrization: reduced degree " +
                                  std::to_string(param.phi.e) + " != u0*u1*index/24 for " +
                                  level.token());
    param.defect_primes = defect_primes_of(param.phi);
    return param;
}

std::optional<std::pair<Rat, Rat>> FamilyParametrization::torsion_point(const Rat& t0,
                                                                        const Rat& t1) const {
    int64_t N = level.N;
    if (N == 3) {
        if (t1 == 0) return std::nullopt; // a3 = t must be nonzero
        return std::make_pair(Rat(3) * t0 * t0, Rat(108) * t1);
    }
    if (N == 4) {
        if (t1 == 0 || t0 == 0) return std::nullopt;
        return std::make_pair(Rat(3) * (t0 * t0 - 4 * t1), Rat(-108) * t0 * t1);
    }
    if (t1 == 0) return std::nullopt;
    Rat t = t0 / t1;
    auto eval = [&](const std::vector<Rat>& cs) {
        Rat v = 0;
        for (auto it = cs.rbegin(); it != cs.rend(); ++it) v = v * t + *it;
        return v;
    };
    Rat xd = eval(cert_den[0]), yd = eval(cert_den[1]);
    if (xd == 0 || yd == 0) return std::nullopt;
    Rat X = eval(cert_num[0]) / xd;
    Rat Y = eval(cert_num[1]) / yd;
    unsigned e = static_cast<unsigned>(phi.e);
    return std::make_pair(X * rpow(Rat(t1), 2 * e), Y * rpow(Rat(t1), 3 * e));
}

double GlobalCurve::height() const {
    double ha = std::pow(std::abs(A.convert_to<double>()), 1.0 / 4);
    double hb = std::pow(std::abs(B.convert_to<double>()), 1.0 / 6);
    return std::max(ha, hb);
}

namespace {

// fast evaluator with power tables
struct PairEval {
    std::vector<std::tuple<int64_t, int64_t, Int>> terms; // (a, b, coef)
    int64_t max_a = 0, max_b = 0;
    explicit PairEval(const WeightedPoly& p) {
        for (const auto& [a, c] : p.coef) {
            int64_t b = p.b_exp(a);
            terms.emplace_back(a, b, c);
            max_a = std::max(max_a, a);
            max_b = std::max(max_b, b);
        }
    }
    Int eval(const Int& t0, const Int& t1, std::vector<Int>& p0, std::vector<Int>& p1) const {
        p0.assign(1, Int(1));
        p1.assign(1, Int(1));
        for (int64_t i = 1; i <= max_a; ++i) p0.push_back(p0.back() * t0);
        for (int64_t i = 1; i <= max_b; ++i) p1.push_back(p1.back() * t1);
        Int s = 0;
        for (const auto& [a, b, c] : terms) s += c * p0[a] * p1[b];
        return s;
    }
};

double growth_constant(const WpsMorphism& phi) {
    // min over unit-height directions of max(|f|^{1/4}, |g|^{1/6}); strictly
    // positive because the components have no common real zero
    double best = std::numeric_limits<double>::infinity();
    auto probe = [&](double t0, double t1) {
        double f = 0, g = 0;
        for (const auto& [a, c] : phi.polys[0].coef)
            f += c.convert_to<double>() * std::pow(t0, double(a)) *
                 std::pow(t1, double(phi.polys[0].b_exp(a)));
        for (const auto& [a, c] : phi.polys[1].coef)
            g += c.convert_to<double>() * std::pow(t0, double(a)) *
                 std::pow(t1, double(phi.polys[1].b_exp(a)));
        double h = std::max(std::pow(std::abs(f), 0.25), std::pow(std::abs(g), 1.0 / 6));
        best = std::min(best, h);
    };
    const int samples = 4000;
    for (int i = 0; i <= samples; ++i) {
        double v = -1.0 + 2.0 * i / samples;
        probe(1.0, v);
        probe(-1.0, v);
        probe(v, 1.0);
        probe(v, -1.0);
    }
    return best;
}

bool minimal_pair(int64_t t0, int64_t t1, int u1) {
    int64_t g = std::gcd(std::abs(t0), std::abs(t1));
    if (u1 == 1) return g == 1;
    // content = prod p^{min(v_p(t0), floor(v_p(t1)/u1))}; t0 = 0 or t1 = 0
    // leave the other coordinate's condition
    if (t0 == 0) {
        // minimal iff t1 is u1-th-power free at every prime
        for (auto [p, e] : factorize(std::abs(t1)))
            if (e >= u1) return false;
        return true;
    }
    if (t1 == 0) return std::abs(t0) == 1;
    if (g == 1) return true;
    for (auto [p, e] : factorize(g)) {
        int v0 = 0;
        int64_t x = std::abs(t0);
        while (x % p == 0) x /= p, ++v0;
        int v1 = 0;
        x = std::abs(t1);
        while (x % p == 0) x /= p, ++v1;
        if (std::min(v0, v1 / u1) >= 1) return false;
    }
    return true;
}

bool canonical_sign(int64_t t0, int64_t t1, int u1) {
    // lambda = -1 flips odd-weight coordinates; first nonzero odd-weight
    // coordinate must be positive
    if (t0 != 0) return t0 > 0;
    if (u1 % 2 == 1) return t1 > 0;
    return true; // only even-weight coordinates nonzero: signs are invariants
}

} // namespace

FamilyResult generate_family(const FamilyParametrization& param, const Rat& B,
                             const FamilyOptions& opts) {
    const WpsMorphism& phi = param.phi;
    int u1 = phi.u[1];
    int64_t e = phi.e;
    double Bd = rat_num(B).convert_to<double>() / rat_den(B).convert_to<double>();

    FamilyResult out{param.level, B, {}, false, 0, 0};
    if (B < 1) return out;

    int64_t T;
    if (opts.force_radius > 0) {
        T = opts.force_radius;
        out.complete = false;
    } else if (opts.force_complete) {
        double c0 = growth_constant(phi);
        T = static_cast<int64_t>(std::ceil(std::pow(Bd, 1.0 / e) / c0 * 1.25)) + 1;
        out.complete = true;
    } else {
        T = static_cast<int64_t>(std::ceil(opts.margin * std::pow(Bd, 1.0 / (2 * e))));
        out.complete = false;
    }
    // clamp to the point budget
    auto box = [&](int64_t R) {
        double b1 = std::pow(double(R), double(u1));
        return (2.0 * R + 1) * (2.0 * b1 + 1);
    };
    int64_t T_requested = T;
    while (T > 2 && box(T) > double(opts.max_points)) --T;
    if (box(T) > double(opts.max_points))
        throw resource_limit_error("generate_family: scan box exceeds max_points");
    if (opts.force_complete && T != T_requested)
        throw resource_limit_error("generate_family: complete scan not affordable at this bound");
    out.scan_radius = T;

    PairEval fe(phi.polys[0]), ge(phi.polys[1]);
    std::vector<Int> p0, p1;
    int64_t T1 = 1;
    for (int i = 0; i < u1; ++i) T1 *= T;

    Int hb_num4 = ipow(rat_num(B), 4), hb_den4 = ipow(rat_den(B), 4);
    Int hb_num6 = ipow(rat_num(B), 6), hb_den6 = ipow(rat_den(B), 6);

    for (int64_t t0 = 0; t0 <= T; ++t0) {
        for (int64_t t1 = -T1; t1 <= T1; ++t1) {
            if (t0 == 0 && t1 == 0) continue;
            if (!canonical_sign(t0, t1, u1)) continue;
            if (!minimal_pair(t0, t1, u1)) continue;
            ++out.points_scanned;
            Int A = fe.eval(Int(t0), Int(t1), p0, p1);
            Int Bc = ge.eval(Int(t0), Int(t1), p0, p1);
            if (A == 0 && Bc == 0)
                throw invariant_violation("generate_family: base point hit at primitive parameter");
            // degenerate fiber
            if (4 * A * A * A + 27 * Bc * Bc == 0) continue;
            // strip content supported on the defect primes
            for (int64_t p : param.defect_primes) {
                while (true) {
                    int va = 0, vb = 0;
                    if (A != 0) {
                        Int x = A;
                        while (va < 4 && x % p == 0) x /= p, ++va;
                    } else {
                        va = 4;
                    }
                    if (Bc != 0) {
                        Int x = Bc;
                        while (vb < 6 && x % p == 0) x /= p, ++vb;
                    } else {
                        vb = 6;
                    }
                    if (va >= 4 && vb >= 6) {
                        A /= ipow(Int(p), 4);
                        Bc /= ipow(Int(p), 6);
                    } else {
                        break;
                    }
                }
            }
            // exact height cut |A|^(1/4), |B|^(1/6) <= B
            if (boost::multiprecision::abs(A) * hb_den4 > hb_num4) continue;
            if (boost::multiprecision::abs(Bc) * hb_den6 > hb_num6) continue;
            out.curves.push_back(GlobalCurve{t0, t1, A, Bc});
        }
    }
    std::sort(out.curves.begin(), out.curves.end(), [](const GlobalCurve& a, const GlobalCurve& b) {
        if (a.A != b.A) return a.A < b.A;
        if (a.B != b.B) return a.B < b.B;
        return std::make_pair(a.t0, a.t1) < std::make_pair(b.t0, b.t1);
    });
    out.curves.erase(std::unique(out.curves.begin(), out.curves.end(),
                                 [](const GlobalCurve& a, const GlobalCurve& b) {
                                     return a.A == b.A && a.B == b.B;
                                 }),
                     out.curves.end());
    return out;
}

namespace {

LocalReport classify(const LevelSpec& level, int64_t a, int64_t b, int64_t q,
                     const ReducedPoint& red) {
    LocalReport rep{q, ReductionKind::good, 0, red};
    if (red.star) {
        if (level.representable())
            throw invariant_violation("additive reduction in representable family at q = " +
                                      std::to_string(q));
        rep.kind = ReductionKind::additive;
        return rep;
    }
    int64_t disc = mod_floor(4 * mul_mod(a, mul_mod(a, mul_mod(a, 1, q), q), q) +
                                 27 * mul_mod(b, b, q),
                             q);
    if (disc != 0) {
        rep.kind = ReductionKind::good;
        rep.trace = q + 1 - point_count(ShortWeierstrassCurve(PrimeField(q), a, b));
        return rep;
    }
    // nodal: slope^2 = 3 alpha with alpha = -3b / (2a)
    int64_t alpha = mul_mod(mod_floor(-3 * b, q), inv_mod(mod_floor(2 * a, q), q), q);
    int64_t s = mul_mod(3, alpha, q);
    bool square = pow_mod(s, (q - 1) / 2, q) == 1;
    rep.kind = square ? ReductionKind::split : ReductionKind::nonsplit;
    return rep;
}

} // namespace

LocalReport local_type(const FamilyParametrization& param, const GlobalCurve& curve, int64_t q) {
    if (std::gcd(q, 6 * param.level.level()) != 1)
        throw coprimality_error("local_type: q must be coprime to 6 * level");
    WpsPoint pt{{4, 6}, {curve.A, curve.B}};
    ReducedPoint red = reduce_mod_p(pt, q);
    if (red.star) return classify(param.level, 0, 0, q, red);
    return classify(param.level, red.coords[0], red.coords[1], q, red);
}

LocalStatistics local_statistics(const FamilyParametrization& param, const FamilyResult& family,
                                 int64_t q) {
    if (std::gcd(q, 6 * param.level.level()) != 1)
        throw coprimality_error("local_statistics: q must be coprime to 6 * level");
    if (q > 250) throw resource_limit_error("local_statistics: q too large for tallies");
    LocalStatistics st;
    st.q = q;
    st.family_size = static_cast<int64_t>(family.curves.size());

    // canonical representative of each orbit of the weighted action on A^2(F_q)
    std::vector<int32_t> canon(q * q, -1);
    {
        std::vector<int64_t> u4(q), u6(q);
        for (int64_t u = 1; u < q; ++u) {
            int64_t u2 = mul_mod(u, u, q);
            u4[u] = mul_mod(u2, u2, q);
            u6[u] = mul_mod(u4[u], u2, q);
        }
        for (int64_t a = 0; a < q; ++a)
            for (int64_t b = 0; b < q; ++b) {
                if (canon[a * q + b] >= 0) continue;
                int64_t best = a * q + b;
                for (int64_t u = 1; u < q; ++u) {
                    int64_t idx = mul_mod(u4[u], a, q) * q + mul_mod(u6[u], b, q);
                    best = std::min(best, idx);
                }
                for (int64_t u = 1; u < q; ++u) {
                    int64_t idx = mul_mod(u4[u], a, q) * q + mul_mod(u6[u], b, q);
                    canon[idx] = static_cast<int32_t>(best);
                }
            }
        canon[0] = 0;
    }

    CurveCensus census = build_census(PrimeField(q));
    // trace of every nonsingular reduced pair, via the census orbits
    std::vector<int32_t> trace_of(q * q, std::numeric_limits<int32_t>::min());
    for (const auto& rec : census.classes) {
        int64_t idx = canon[rec.A * q + rec.B];
        trace_of[idx] = static_cast<int32_t>(rec.trace_a);
    }

    for (const auto& c : family.curves) {
        int64_t a = static_cast<int64_t>(c.A % q), b = static_cast<int64_t>(c.B % q);
        a = mod_floor(a, q);
        b = mod_floor(b, q);
        if (a == 0 && b == 0) {
            if (param.level.representable())
                throw invariant_violation("additive reduction in representable family at q = " +
                                          std::to_string(q));
            ++st.additive_count;
            continue;
        }
        int64_t idx = canon[a * q + b];
        int64_t disc = mod_floor(4 * mul_mod(a, mul_mod(a, a, q), q) + 27 * mul_mod(b, b, q), q);
        if (disc != 0) {
            std::vector<int64_t> key{idx / q, idx % q};
            ++st.per_point[key];
            ++st.per_trace[trace_of[idx]];
        } else {
            ++st.mult_count;
            int64_t alpha = mul_mod(mod_floor(-3 * b, q), inv_mod(mod_floor(2 * a, q), q), q);
            bool square = pow_mod(mul_mod(3, alpha, q), (q - 1) / 2, q) == 1;
            if (square)
                ++st.split_count;
            else
                ++st.nonsplit_count;
        }
    }

    // model predictions
    st.predicted_mult_fraction = Rat(rational_cusp_count(param.level, q), q + 1);
    for (const auto& rec : census.classes) {
        int64_t idx = canon[rec.A * q + rec.B];
        std::vector<int64_t> key{idx / q, idx % q};
        st.predicted_per_point[key] = fiber_size(param.level, rec, q) / (q + 1);
    }
    return st;
}

} // namespace ecstat
