#include "ecstat/wps_rational.hpp"

#include <algorithm>
#include <cmath>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

int64_t WeightedPoly::b_exp(int64_t a) const {
    int64_t rem = wdeg - a * u0;
    if (rem < 0 || rem % u1 != 0)
        throw bad_input_error("WeightedPoly: monomial t0^" + std::to_string(a) +
                              " impossible at weighted degree " + std::to_string(wdeg));
    return rem / u1;
}

void WeightedPoly::set(int64_t a, const Int& c) {
    b_exp(a); // degree feasibility check
    if (c == 0)
        coef.erase(a);
    else
        coef[a] = c;
}

Int WeightedPoly::eval(const Int& t0, const Int& t1) const {
    Int s = 0;
    for (const auto& [a, c] : coef) s += c * ipow(t0, static_cast<unsigned>(a)) * ipow(t1, static_cast<unsigned>(b_exp(a)));
    return s;
}

int64_t WeightedPoly::eval_mod(int64_t t0, int64_t t1, int64_t q) const {
    int64_t s = 0;
    for (const auto& [a, c] : coef) {
        int64_t term = static_cast<int64_t>(c % q);
        term = mul_mod(mod_floor(term, q), pow_mod(t0, a, q), q);
        term = mul_mod(term, pow_mod(t1, b_exp(a), q), q);
        s = mod_floor(s + term, q);
    }
    return s;
}

WeightedPoly wpoly_mul(const WeightedPoly& f, const WeightedPoly& g) {
    if (f.u0 != g.u0 || f.u1 != g.u1) throw bad_input_error("wpoly_mul: weight mismatch");
    WeightedPoly r;
    r.u0 = f.u0, r.u1 = f.u1, r.wdeg = f.wdeg + g.wdeg;
    for (const auto& [a1, c1] : f.coef)
        for (const auto& [a2, c2] : g.coef) {
            Int& slot = r.coef[a1 + a2];
            slot += c1 * c2;
            if (slot == 0) r.coef.erase(a1 + a2);
        }
    return r;
}

WeightedPoly wpoly_add(const WeightedPoly& f, const WeightedPoly& g) {
    if (f.is_zero()) return g;
    if (g.is_zero()) return f;
    if (f.u0 != g.u0 || f.u1 != g.u1 || f.wdeg != g.wdeg)
        throw bad_input_error("wpoly_add: degree mismatch");
    WeightedPoly r = f;
    for (const auto& [a, c] : g.coef) {
        Int& slot = r.coef[a];
        slot += c;
        if (slot == 0) r.coef.erase(a);
    }
    return r;
}

WeightedPoly wpoly_scale(const WeightedPoly& f, const Int& c) {
    WeightedPoly r = f;
    if (c == 0) {
        r.coef.clear();
        return r;
    }
    for (auto& [a, v] : r.coef) v *= c;
    return r;
}

namespace {

int ord_p(Int v, const Int& p) {
    int e = 0;
    while (v != 0 && v % p == 0) v /= p, ++e;
    return e;
}

} // namespace

Rat content_ideal(const WeightVector& w, const std::vector<Int>& x) {
    if (w.size() != x.size()) throw bad_input_error("content_ideal: size mismatch");
    Int g = 0;
    for (const auto& xi : x) g = boost::multiprecision::gcd(g, xi);
    if (g == 0) throw bad_input_error("content_ideal: zero vector");
    g = boost::multiprecision::abs(g);
    if (g == 1) return Rat(1);
    Int content = 1;
    for (const auto& [p, e] : factorize(g)) {
        int m = std::numeric_limits<int>::max();
        for (size_t j = 0; j < x.size(); ++j) {
            if (x[j] == 0) continue; // ord_p(0) = infinity
            m = std::min(m, ord_p(x[j], p) / w[j]);
        }
        content *= ipow(p, static_cast<unsigned>(m));
    }
    return Rat(content);
}

WpsPoint normalize(const WeightVector& w, const std::vector<Int>& x_in) {
    std::vector<Int> x = x_in;
    bool all_zero = std::all_of(x.begin(), x.end(), [](const Int& v) { return v == 0; });
    if (all_zero) throw bad_input_error("normalize: zero vector");
    Rat c = content_ideal(w, x);
    Int d = rat_num(c);
    if (d > 1)
        for (size_t j = 0; j < x.size(); ++j) x[j] /= ipow(d, static_cast<unsigned>(w[j]));
    // sign canonicalization via lambda = -1, which flips exactly the
    // odd-weight coordinates
    for (size_t j = 0; j < x.size(); ++j) {
        if (x[j] == 0) continue;
        if (w[j] % 2 == 0) continue;
        if (x[j] < 0)
            for (size_t k = 0; k < x.size(); ++k)
                if (w[k] % 2 == 1) x[k] = -x[k];
        break;
    }
    return WpsPoint{w, x};
}

double WpsPoint::height() const {
    double h = 0;
    for (size_t j = 0; j < coords.size(); ++j) {
        double v = std::abs(coords[j].convert_to<double>());
        if (v > 0) h = std::max(h, std::pow(v, 1.0 / weights[j]));
    }
    return h;
}

bool WpsPoint::height_leq(const Rat& bound) const {
    if (bound <= 0) return false;
    Int num = rat_num(bound), den = rat_den(bound);
    for (size_t j = 0; j < coords.size(); ++j) {
        unsigned wj = static_cast<unsigned>(weights[j]);
        if (boost::multiprecision::abs(coords[j]) * ipow(den, wj) > ipow(num, wj)) return false;
    }
    return true;
}

ReducedPoint reduce_mod_p(const WpsPoint& point, int64_t q) {
    // rescale so that min_j floor(ord_q(x_j)/w_j) = 0 (already true for
    // normalized points), then reduce coordinates
    int k = std::numeric_limits<int>::max();
    for (size_t j = 0; j < point.coords.size(); ++j) {
        if (point.coords[j] == 0) continue;
        k = std::min(k, ord_p(point.coords[j], q) / point.weights[j]);
    }
    ReducedPoint red{q, false, {}};
    bool all_zero = true;
    Int Q(q);
    for (size_t j = 0; j < point.coords.size(); ++j) {
        Int v = point.coords[j];
        if (k > 0 && v != 0) v /= ipow(Q, static_cast<unsigned>(k * point.weights[j]));
        int64_t r = static_cast<int64_t>(mod_floor(static_cast<int64_t>(v % q), q));
        red.coords.push_back(r);
        if (r != 0) all_zero = false;
    }
    if (all_zero) {
        red.star = true;
        red.coords.clear();
    }
    return red;
}

std::vector<int64_t> ReducedPoint::canonical(const WeightVector& w) const {
    if (star) return {};
    std::vector<int64_t> best = coords;
    for (int64_t lam = 2; lam < q; ++lam) {
        std::vector<int64_t> cand(coords.size());
        for (size_t j = 0; j < coords.size(); ++j)
            cand[j] = mul_mod(pow_mod(lam, w[j], q), coords[j], q);
        if (cand < best) best = cand;
    }
    return best;
}

std::vector<WpsPoint> enumerate_points(const WeightVector& w, const Rat& B, int64_t max_box) {
    if (w.size() != 2) throw bad_input_error("enumerate_points: only weighted projective lines supported");
    if (B < 1) return {};
    Int num = rat_num(B), den = rat_den(B);
    std::vector<int64_t> bound(2);
    for (int j = 0; j < 2; ++j) {
        // floor(B^{w_j})
        Int m = ipow(num, static_cast<unsigned>(w[j])) / ipow(den, static_cast<unsigned>(w[j]));
        if (m > max_box) throw resource_limit_error("enumerate_points: box exceeds ceiling");
        bound[j] = static_cast<int64_t>(m);
    }
    if ((2 * bound[0] + 1) * (2 * bound[1] + 1) > max_box)
        throw resource_limit_error("enumerate_points: box exceeds ceiling");
    std::vector<WpsPoint> out;
    for (int64_t x0 = -bound[0]; x0 <= bound[0]; ++x0)
        for (int64_t x1 = -bound[1]; x1 <= bound[1]; ++x1) {
            if (x0 == 0 && x1 == 0) continue;
            std::vector<Int> x{Int(x0), Int(x1)};
            if (content_ideal(w, x) != 1) continue;
            WpsPoint pt = normalize(w, x);
            if (pt.coords != x) continue; // not the canonical sign representative
            out.push_back(std::move(pt));
        }
    return out;
}

void WpsMorphism::validate() const {
    if (u.size() != 2 || w.size() != polys.size())
        throw bad_input_error("WpsMorphism: shape mismatch");
    if (e < 1) throw bad_input_error("WpsMorphism: reduced degree must be positive");
    for (size_t j = 0; j < polys.size(); ++j) {
        if (polys[j].u0 != u[0] || polys[j].u1 != u[1])
            throw bad_input_error("WpsMorphism: component weight mismatch");
        if (polys[j].wdeg != e * w[j])
            throw bad_input_error("WpsMorphism: component " + std::to_string(j) +
                                  " has weighted degree " + std::to_string(polys[j].wdeg) +
                                  ", want " + std::to_string(e * w[j]));
        for (const auto& [a, c] : polys[j].coef) polys[j].b_exp(a); // monomial check
    }
}

std::vector<Int> WpsMorphism::apply(const std::vector<Int>& x) const {
    std::vector<Int> y;
    for (const auto& f : polys) y.push_back(f.eval(x[0], x[1]));
    return y;
}

Rat defect(const WpsMorphism& f, const WpsPoint& point) {
    std::vector<Int> y = f.apply(point.coords);
    if (std::all_of(y.begin(), y.end(), [](const Int& v) { return v == 0; }))
        throw bad_input_error("defect: point maps into the base locus");
    Rat iw = content_ideal(f.w, y);
    Rat iu = content_ideal(f.u, point.coords);
    return iw / rpow(iu, static_cast<unsigned>(f.e));
}

} // namespace ecstat
