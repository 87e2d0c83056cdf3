#include "ecstat/ff_curves.hpp"

#include <fstream>
#include <numeric>
#include <sstream>

#include "ecstat/arith.hpp"
#include "ecstat/errors.hpp"

namespace ecstat {

PrimeField::PrimeField(int64_t p_) : p(p_) {
    if (p < 5 || !is_prime(p)) throw bad_input_error("PrimeField: need a prime p >= 5, got " + std::to_string(p_));
}

ShortWeierstrassCurve::ShortWeierstrassCurve(PrimeField f, int64_t A_, int64_t B_)
    : field(f), A(mod_floor(A_, f.p)), B(mod_floor(B_, f.p)) {
    int64_t p = field.p;
    int64_t disc = mod_floor(4 * mul_mod(A, mul_mod(A, A, p), p) + 27 * mul_mod(B, B, p), p);
    if (disc == 0) throw bad_input_error("singular curve: 4A^3 + 27B^2 = 0 mod p");
}

namespace {

// chi[v] in {-1,0,1}: quadratic character of v, and sqrt[v]: some square root
// of v when chi[v] >= 0.
struct QuadTables {
    std::vector<int8_t> chi;
    std::vector<int64_t> sqrt;
    explicit QuadTables(int64_t p) : chi(p, -1), sqrt(p, 0) {
        chi[0] = 0;
        for (int64_t y = 0; y <= p / 2; ++y) {
            int64_t s = mul_mod(y, y, p);
            if (chi[s] < 0 || s == 0) {
                if (s != 0) chi[s] = 1;
                sqrt[s] = y;
            }
        }
    }
};

int64_t rhs(int64_t x, int64_t A, int64_t B, int64_t p) {
    return mod_floor(mul_mod(x, mul_mod(x, x, p) + A, p) + B, p);
}

int64_t trace_via_character_sum(int64_t A, int64_t B, int64_t p, const QuadTables& t) {
    int64_t s = 0;
    for (int64_t x = 0; x < p; ++x) s += t.chi[rhs(x, A, B, p)];
    return -s; // N = p + 1 + sum, a = p + 1 - N
}

// Affine points (x,y); the point at infinity is handled by the callers.
std::vector<std::pair<int64_t, int64_t>> affine_points(int64_t A, int64_t B, int64_t p,
                                                       const QuadTables& t) {
    std::vector<std::pair<int64_t, int64_t>> pts;
    for (int64_t x = 0; x < p; ++x) {
        int64_t v = rhs(x, A, B, p);
        if (t.chi[v] == 0) {
            pts.emplace_back(x, 0);
        } else if (t.chi[v] > 0) {
            int64_t y = t.sqrt[v];
            pts.emplace_back(x, y);
            pts.emplace_back(x, p - y);
        }
    }
    return pts;
}

// Scalar multiple in Jacobian coordinates (no inversions); returns true when
// m * (x,y) is the point at infinity.
bool is_killed_by(int64_t x, int64_t y, int64_t m, int64_t A, int64_t p) {
    // Jacobian (X, Y, Z) represents (X/Z^2, Y/Z^3)
    int64_t X = 0, Y = 0, Z = 0; // infinity
    int64_t QX = x, QY = y, QZ = 1;
    auto dbl = [&](int64_t& RX, int64_t& RY, int64_t& RZ) {
        if (RZ == 0 || RY == 0) {
            RX = RY = 1, RZ = 0; // 2-torsion doubles to infinity
            return;
        }
        int64_t YY = mul_mod(RY, RY, p);
        int64_t S = mul_mod(4, mul_mod(RX, YY, p), p);
        int64_t ZZ = mul_mod(RZ, RZ, p);
        int64_t M = mod_floor(3 * mul_mod(RX, RX, p) + mul_mod(A, mul_mod(ZZ, ZZ, p), p), p);
        int64_t X2 = mod_floor(mul_mod(M, M, p) - 2 * S, p);
        int64_t Y2 = mod_floor(mul_mod(M, mod_floor(S - X2, p), p) - mul_mod(8, mul_mod(YY, YY, p), p), p);
        int64_t Z2 = mul_mod(2, mul_mod(RY, RZ, p), p);
        RX = X2, RY = Y2, RZ = Z2;
    };
    auto add_affine = [&](int64_t& RX, int64_t& RY, int64_t& RZ, int64_t qx, int64_t qy) {
        // R += (qx, qy), mixed addition
        if (RZ == 0) {
            RX = qx, RY = qy, RZ = 1;
            return;
        }
        int64_t ZZ = mul_mod(RZ, RZ, p);
        int64_t U2 = mul_mod(qx, ZZ, p);
        int64_t S2 = mul_mod(qy, mul_mod(ZZ, RZ, p), p);
        if (U2 == RX) {
            if (S2 == RY) {
                dbl(RX, RY, RZ);
            } else {
                RX = RY = 1, RZ = 0;
            }
            return;
        }
        int64_t H = mod_floor(U2 - RX, p);
        int64_t R = mod_floor(S2 - RY, p);
        int64_t HH = mul_mod(H, H, p);
        int64_t HHH = mul_mod(H, HH, p);
        int64_t V = mul_mod(RX, HH, p);
        int64_t X2 = mod_floor(mul_mod(R, R, p) - HHH - 2 * V, p);
        int64_t Y2 = mod_floor(mul_mod(R, mod_floor(V - X2, p), p) - mul_mod(RY, HHH, p), p);
        int64_t Z2 = mul_mod(RZ, H, p);
        RX = X2, RY = Y2, RZ = Z2;
    };
    // left-to-right double-and-add
    bool started = false;
    for (int bit = 62; bit >= 0; --bit) {
        if (!started) {
            if ((m >> bit) & 1) {
                X = QX, Y = QY, Z = QZ;
                started = true;
            }
            continue;
        }
        dbl(X, Y, Z);
        if ((m >> bit) & 1) add_affine(X, Y, Z, x, y);
    }
    return Z == 0;
}

std::pair<int64_t, int64_t> structure_from_points(int64_t A, int64_t B, int64_t p, int64_t N,
                                                  const QuadTables& t) {
    int64_t n2 = 1;
    std::vector<std::pair<int64_t, int64_t>> pts;
    for (auto [ell, e] : factorize(N)) {
        if (e < 2) continue;            // the ell-part is cyclic
        if ((p - 1) % ell != 0) continue; // Weil pairing: full ell-torsion needs mu_ell
        if (pts.empty()) pts = affine_points(A, B, p, t);
        // ell-part is Z/ell^a x Z/ell^b with a+b = e, b <= a; b is the largest
        // j <= e/2 with #E[ell^j] = ell^(2j).
        int b = 0;
        int64_t m = 1;
        for (int j = 1; 2 * j <= e; ++j) {
            m *= ell;
            int64_t killed = 1; // the identity
            for (auto& [x, y] : pts)
                if (is_killed_by(x, y, m, A, p)) ++killed;
            if (killed == m * m)
                b = j;
            else
                break;
        }
        for (int j = 0; j < b; ++j) n2 *= ell;
    }
    return {N / n2, n2};
}

int aut_count_of(int64_t A, int64_t B, int64_t p) {
    if (A != 0 && B != 0) return 2;
    if (A == 0) return static_cast<int>(std::gcd<int64_t>(6, p - 1));
    return static_cast<int>(std::gcd<int64_t>(4, p - 1));
}

} // namespace

int64_t point_count(const ShortWeierstrassCurve& curve) {
    QuadTables t(curve.field.p);
    return curve.field.p + 1 - trace_via_character_sum(curve.A, curve.B, curve.field.p, t);
}

std::pair<int64_t, int64_t> group_structure(const ShortWeierstrassCurve& curve) {
    int64_t p = curve.field.p;
    QuadTables t(p);
    int64_t N = p + 1 - trace_via_character_sum(curve.A, curve.B, p, t);
    return structure_from_points(curve.A, curve.B, p, N, t);
}

int automorphism_count(const ShortWeierstrassCurve& curve) {
    return aut_count_of(curve.A, curve.B, curve.field.p);
}

CurveCensus build_census(const PrimeField& field, int64_t ceiling) {
    int64_t p = field.p;
    if (p > ceiling)
        throw resource_limit_error("build_census: p = " + std::to_string(p) +
                                   " exceeds ceiling " + std::to_string(ceiling));
    QuadTables t(p);
    std::vector<bool> visited(static_cast<size_t>(p) * p, false);
    // powers u^4 and u^6 for u in F_p^x
    std::vector<int64_t> u4(p), u6(p);
    for (int64_t u = 1; u < p; ++u) {
        int64_t u2 = mul_mod(u, u, p);
        u4[u] = mul_mod(u2, u2, p);
        u6[u] = mul_mod(u4[u], u2, p);
    }
    CurveCensus census;
    census.p = p;
    for (int64_t A = 0; A < p; ++A) {
        for (int64_t B = 0; B < p; ++B) {
            if (visited[A * p + B]) continue;
            int64_t disc = mod_floor(4 * mul_mod(A, mul_mod(A, A, p), p) + 27 * mul_mod(B, B, p), p);
            if (disc == 0) continue;
            // scanning in lex order, so (A,B) is its orbit's least element
            for (int64_t u = 1; u < p; ++u)
                visited[mul_mod(u4[u], A, p) * p + mul_mod(u6[u], B, p)] = true;
            IsoClassRecord rec;
            rec.A = A;
            rec.B = B;
            rec.trace_a = trace_via_character_sum(A, B, p, t);
            int64_t N = p + 1 - rec.trace_a;
            std::tie(rec.n1, rec.n2) = structure_from_points(A, B, p, N, t);
            rec.aut_count = aut_count_of(A, B, p);
            rec.orbit_size = (p - 1) / rec.aut_count;
            census.classes.push_back(rec);
        }
    }
    census.validate();
    return census;
}

void CurveCensus::validate() const {
    Int orbit_sum = 0;
    Rat mass = 0;
    for (const auto& c : classes) {
        if (c.n1 * c.n2 != p + 1 - c.trace_a)
            throw invariant_violation("census: n1*n2 != p+1-a for class (" + std::to_string(c.A) +
                                      "," + std::to_string(c.B) + ") over p=" + std::to_string(p));
        if (c.n1 % c.n2 != 0 || (p - 1) % c.n2 != 0)
            throw invariant_violation("census: invariant factor conditions fail over p=" + std::to_string(p));
        if (c.trace_a * c.trace_a > 4 * p)
            throw invariant_violation("census: Weil bound violated over p=" + std::to_string(p));
        if (c.orbit_size * c.aut_count != p - 1)
            throw invariant_violation("census: orbit size mismatch over p=" + std::to_string(p));
        orbit_sum += c.orbit_size;
        mass += Rat(1, c.aut_count);
    }
    if (orbit_sum != Int(p) * (p - 1))
        throw invariant_violation("census: sum of orbit sizes != p^2 - p over p=" + std::to_string(p));
    if (mass != Rat(p))
        throw invariant_violation("census: mass formula sum 1/|Aut| != p over p=" + std::to_string(p));
}

std::string census_file_name(int64_t p) { return "census_p" + std::to_string(p) + ".jsonl"; }

void save_census(const CurveCensus& census, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw bad_input_error("cannot open " + path + " for writing");
    for (const auto& c : census.classes) {
        out << "{\"p\":" << census.p << ",\"A\":" << c.A << ",\"B\":" << c.B
            << ",\"a\":" << c.trace_a << ",\"n1\":" << c.n1 << ",\"n2\":" << c.n2
            << ",\"aut\":" << c.aut_count << "}\n";
    }
}

namespace {

int64_t parse_field(const std::string& line, const std::string& key) {
    auto pos = line.find("\"" + key + "\":");
    if (pos == std::string::npos) throw bad_input_error("census cache line missing key " + key);
    return std::stoll(line.substr(pos + key.size() + 3));
}

} // namespace

CurveCensus load_census(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw bad_input_error("cannot open " + path);
    CurveCensus census;
    census.p = 0;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        IsoClassRecord rec;
        int64_t p = parse_field(line, "p");
        if (census.p == 0)
            census.p = p;
        else if (census.p != p)
            throw bad_input_error("census cache mixes primes: " + path);
        rec.A = parse_field(line, "A");
        rec.B = parse_field(line, "B");
        rec.trace_a = parse_field(line, "a");
        rec.n1 = parse_field(line, "n1");
        rec.n2 = parse_field(line, "n2");
        rec.aut_count = static_cast<int>(parse_field(line, "aut"));
        rec.orbit_size = (census.p - 1) / rec.aut_count;
        census.classes.push_back(rec);
    }
    if (census.p == 0) throw bad_input_error("census cache empty: " + path);
    census.validate();
    return census;
}

} // namespace ecstat
