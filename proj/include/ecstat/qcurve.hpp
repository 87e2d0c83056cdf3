#pragma once

#include <optional>

#include "ecstat/errors.hpp"
#include "ecstat/numeric.hpp"

namespace ecstat {

// Exact group law on y^2 = x^3 + ax + b over Q. The empty optional is the
// point at infinity.
struct QCurvePoint {
    std::optional<std::pair<Rat, Rat>> xy;
    bool infinite() const { return !xy.has_value(); }
};

inline QCurvePoint qcurve_add(const Rat& a, const QCurvePoint& P, const QCurvePoint& Q) {
    if (P.infinite()) return Q;
    if (Q.infinite()) return P;
    auto [x1, y1] = *P.xy;
    auto [x2, y2] = *Q.xy;
    Rat lam;
    if (x1 == x2) {
        if (y1 + y2 == 0) return {};
        lam = (3 * x1 * x1 + a) / (2 * y1);
    } else {
        lam = (y2 - y1) / (x2 - x1);
    }
    Rat x3 = lam * lam - x1 - x2;
    Rat y3 = lam * (x1 - x3) - y1;
    return {std::make_pair(x3, y3)};
}

inline QCurvePoint qcurve_mul(const Rat& a, QCurvePoint P, int64_t k) {
    QCurvePoint R;
    while (k > 0) {
        if (k & 1) R = qcurve_add(a, R, P);
        P = qcurve_add(a, P, P);
        k >>= 1;
    }
    return R;
}

inline bool qcurve_on_curve(const Rat& a, const Rat& b, const QCurvePoint& P) {
    if (P.infinite()) return true;
    auto [x, y] = *P.xy;
    return y * y == x * x * x + a * x + b;
}

// exact order when it divides max_order, otherwise nullopt
inline std::optional<int64_t> qcurve_point_order(const Rat& a, const QCurvePoint& P,
                                                 int64_t max_order) {
    QCurvePoint R = P;
    for (int64_t n = 1; n <= max_order; ++n) {
        if (R.infinite()) return n;
        R = qcurve_add(a, R, P);
    }
    return std::nullopt;
}

} // namespace ecstat
