#include <climits>
#include <numeric>
#include <set>

#include "ellff/mwlattice.hpp"

namespace ellff {

namespace {

using RF = RationalFunction;

constexpr int kInf = INT_MAX / 4;

int val(const RF& f, const Place& v) { return f.is_zero() ? kInf : valuation(f, v); }

mpq_class half_of(int n) { return mpq_class(n, 2); }

// local term at a bad place for a point integral on the minimal model
mpq_class local_contribution(const ReductionData& rd, const RF& x, const RF& y)
{
    const Weierstrass& W = rd.model;
    const Place& lp = rd.local_place;
    const FiniteField& F = x.field();
    auto c = [&](int n) { return RF::constant(F, n); };
    RF psi2 = c(2) * y + W.a1() * x + W.a3();
    RF fx = c(3) * x * x + c(2) * W.a2() * x + W.a4() - W.a1() * y;
    int v2 = val(psi2, lp);
    if (v2 == 0 || val(fx, lp) == 0) return 0;  // nonsingular reduction
    if (rd.multiplicative()) {
        int N = rd.type.n;
        mpq_class i = std::min(mpq_class(v2), mpq_class(N, 2));
        mpq_class r = i * (N - i) / N;
        r.canonicalize();
        return r;
    }
    RF psi3 = c(3) * x.pow(4) + W.b2() * x.pow(3) + c(3) * W.b4() * x * x + c(3) * W.b6() * x + W.b8();
    int v3 = val(psi3, lp);
    if (v2 < kInf && v3 >= 3 * v2) return mpq_class(2 * v2, 3);
    if (v3 >= kInf) throw Error("local height: point is singular to all orders at " + rd.place.str());
    mpq_class r(v3, 4);
    r.canonicalize();
    return r;
}

}  // namespace

HeightParts height_parts(const EllipticCurveFF& E, const CurvePoint& P)
{
    if (!E.on_curve(P)) throw InputError("point is not on the curve: " + P.str());
    HeightParts h;
    if (P.inf) return h;
    h.chi = surface_chi(E);
    auto specials = special_places(E);
    std::set<FqPoly> special_polys;
    for (auto& rd : specials)
        if (!rd.place.infinite) special_polys.insert(rd.place.poly);
    // places where the user model is already minimal
    mpq_class inter = 0;
    for (auto& [g, e] : factor(P.x.den())) {
        if (special_polys.count(g)) continue;
        if (e % 2) throw VerificationError("x has a pole of odd order at " + g.str());
        inter += mpq_class(g.degree() * e, 2);
    }
    for (auto& rd : specials) {
        CurvePoint Q = P;
        if (rd.place.infinite) Q = CurvePoint::affine(P.x.at_infinity(), P.y.at_infinity());
        Q = Q.in_frame(rd.transform);
        int vx = val(Q.x, rd.local_place);
        int deg = rd.place.degree;
        if (vx < 0) {
            if (vx % 2) throw VerificationError("x has a pole of odd order at " + rd.place.str());
            inter += half_of(-vx * deg);
            continue;
        }
        if (rd.good() || rd.c_v == 1) continue;
        mpq_class cv = local_contribution(rd, Q.x, Q.y);
        if (cv != 0) h.contributions.push_back({rd.place, cv * deg});
    }
    h.intersection = inter;
    h.height = 2 * h.chi + 2 * inter;
    for (auto& l : h.contributions) h.height -= l.contr;
    h.height.canonicalize();
    return h;
}

mpq_class canonical_height(const EllipticCurveFF& E, const CurvePoint& P) { return height_parts(E, P).height; }

mpq_class height_pairing(const EllipticCurveFF& E, const CurvePoint& P, const CurvePoint& Q)
{
    mpq_class r = (canonical_height(E, E.add(P, Q)) - canonical_height(E, P) - canonical_height(E, Q)) / 2;
    r.canonicalize();
    return r;
}

int64_t naive_height(const EllipticCurveFF& E, const CurvePoint& P)
{
    (void)E;
    if (P.inf) return 0;
    int dn = P.x.num().is_zero() ? 0 : P.x.num().degree();
    int dd = P.x.den().degree();
    return dd + std::max(0, dn - dd);
}

int64_t height_denominator(const EllipticCurveFF& E)
{
    int64_t M = 1;
    for (auto& rd : E.local_data()) {
        int64_t d = 1;
        switch (rd.type.kind) {
        case KodairaType::In: d = rd.type.n; break;
        case KodairaType::Ins:
        case KodairaType::I0s: d = 4; break;
        case KodairaType::IV:
        case KodairaType::IVs: d = 3; break;
        case KodairaType::III:
        case KodairaType::IIIs: d = 2; break;
        default: break;
        }
        M = std::lcm(M, d);
    }
    return M;
}

TelescopeResult telescoping_height(const EllipticCurveFF& E, const CurvePoint& P, int max_steps, int max_degree)
{
    TelescopeResult r;
    const int64_t M = height_denominator(E);
    const Weierstrass& W = E.model();
    const FiniteField& F = E.field();
    auto c = [&](int n) { return RF::constant(F, n); };
    CurvePoint Q = P;
    bool odd = F.p() != 2;
    RF x = P.x;
    bool zero = P.inf;
    mpz_class scale = 1;
    std::vector<mpq_class> est;
    for (int n = 0; n <= max_steps; ++n) {
        int64_t h = 0;
        if (!zero) {
            CurvePoint X = CurvePoint::affine(x, odd ? RF(F) : Q.y);
            h = naive_height(E, X);
        }
        mpq_class t(mpz_class(std::to_string(h)), scale);
        t.canonicalize();
        r.terms.push_back(t);
        mpz_class rounded;
        mpz_class num = 2 * t.get_num() * M + t.get_den();
        mpz_fdiv_q(rounded.get_mpz_t(), num.get_mpz_t(), mpz_class(2 * t.get_den()).get_mpz_t());
        est.push_back(mpq_class(rounded, M));
        est.back().canonicalize();
        r.steps = n;
        size_t k = est.size();
        if (zero || (k >= 3 && est[k - 1] == est[k - 2] && est[k - 2] == est[k - 3])) {
            r.stable = true;
            break;
        }
        int deg = x.num().degree() + x.den().degree();
        if (n == max_steps || 4 * deg > max_degree) break;
        // double
        if (odd) {
            RF den = c(4) * x.pow(3) + W.b2() * x * x + c(2) * W.b4() * x + W.b6();
            if (den.is_zero()) {
                zero = true;
            } else {
                x = (x.pow(4) - W.b4() * x * x - c(2) * W.b6() * x - W.b8()) / den;
            }
        } else {
            Q = E.add(Q, Q);
            zero = Q.inf;
            if (!zero) x = Q.x;
        }
        scale *= 4;
    }
    r.value = zero ? mpq_class(0) : est.back();
    if (zero) r.stable = true;
    return r;
}

}  // namespace ellff
