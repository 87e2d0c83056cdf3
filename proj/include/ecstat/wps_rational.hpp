#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ecstat/numeric.hpp"

namespace ecstat {

using WeightVector = std::vector<int>; // entries >= 1

// Weighted-homogeneous polynomial in (t0, t1) with source weights (u0, u1):
// sum of c_a * t0^a * t1^b where a*u0 + b*u1 = wdeg.
struct WeightedPoly {
    int u0 = 1, u1 = 1;
    int64_t wdeg = 0;
    std::map<int64_t, Int> coef; // exponent of t0 -> coefficient

    int64_t b_exp(int64_t a) const; // exponent of t1; throws if not integral
    Int eval(const Int& t0, const Int& t1) const;
    int64_t eval_mod(int64_t t0, int64_t t1, int64_t q) const;
    void set(int64_t a, const Int& c);
    bool is_zero() const { return coef.empty(); }
};

WeightedPoly wpoly_mul(const WeightedPoly& f, const WeightedPoly& g);
WeightedPoly wpoly_add(const WeightedPoly& f, const WeightedPoly& g);
WeightedPoly wpoly_scale(const WeightedPoly& f, const Int& c);

// Content of an integer tuple under weights w:
// prod_p p^{min_j floor(ord_p(x_j)/w_j)}.
Rat content_ideal(const WeightVector& w, const std::vector<Int>& x);

struct WpsPoint {
    WeightVector weights;
    std::vector<Int> coords; // minimal, sign-canonical
    double height() const;
    // exact test height <= bound, i.e. |x_j| <= bound^{w_j} for all j
    bool height_leq(const Rat& bound) const;
};

// Scales away the content, then canonicalizes the sign: the first nonzero
// coordinate sitting at an odd weight is made positive (for all-even weights
// the coordinate signs are invariants of the point and stay untouched).
WpsPoint normalize(const WeightVector& w, const std::vector<Int>& x);

struct ReducedPoint {
    int64_t q;
    bool star = false;
    std::vector<int64_t> coords; // empty when star

    // lexicographically least representative of the orbit under the
    // weighted F_q^x action; used for comparisons and tallies
    std::vector<int64_t> canonical(const WeightVector& w) const;
    bool operator==(const ReducedPoint& o) const {
        return q == o.q && star == o.star && coords == o.coords;
    }
};

ReducedPoint reduce_mod_p(const WpsPoint& point, int64_t q);

// All normalized points of P(w)(Q) of height <= B, each exactly once.
// Dimension <= 2 (weighted projective lines). Throws resource_limit_error
// when the scan box exceeds max_box cells.
std::vector<WpsPoint> enumerate_points(const WeightVector& w, const Rat& B,
                                       int64_t max_box = 200'000'000);

// f : P(u) -> P(w) by weighted-homogeneous integer polynomials with
// deg f_j = e * w_j.
struct WpsMorphism {
    WeightVector u, w;
    std::vector<WeightedPoly> polys;
    int64_t e = 0; // reduced degree

    void validate() const; // degree bookkeeping on every monomial
    std::vector<Int> apply(const std::vector<Int>& x) const;
};

// delta_f(x) = I_w(f(x)) * I_u(x)^{-e}. Errors when f(x) = 0 (base locus).
Rat defect(const WpsMorphism& f, const WpsPoint& point);

} // namespace ecstat
