#include <algorithm>
#include <numeric>

#include "ellff/curves.hpp"

namespace ellff {

namespace {

using RF = RationalFunction;

// truncated power series over F_q in the local parameter s
struct Series {
    const FiniteField* F;
    std::vector<uint32_t> c;

    Series(const FiniteField& f, int N) : F(&f), c(N, f.zero()) {}
    int N() const { return int(c.size()); }
    static Series constant(const FiniteField& f, int N, uint32_t a)
    {
        Series r(f, N);
        r.c[0] = a;
        return r;
    }
    Series operator+(const Series& b) const
    {
        Series r(*F, N());
        for (int i = 0; i < N(); ++i) r.c[i] = F->add(c[i], b.c[i]);
        return r;
    }
    Series operator-(const Series& b) const
    {
        Series r(*F, N());
        for (int i = 0; i < N(); ++i) r.c[i] = F->sub(c[i], b.c[i]);
        return r;
    }
    Series operator*(const Series& b) const
    {
        Series r(*F, N());
        for (int i = 0; i < N(); ++i) {
            if (c[i] == F->zero()) continue;
            for (int j = 0; i + j < N(); ++j) r.c[i + j] = F->add(r.c[i + j], F->mul(c[i], b.c[j]));
        }
        return r;
    }
    Series scale(uint32_t a) const
    {
        Series r(*F, N());
        for (int i = 0; i < N(); ++i) r.c[i] = F->mul(c[i], a);
        return r;
    }
    Series inv() const
    {
        if (c[0] == F->zero()) throw Error("internal: series not invertible");
        Series r(*F, N());
        uint32_t i0 = F->inv(c[0]);
        r.c[0] = i0;
        for (int n = 1; n < N(); ++n) {
            uint32_t s = F->zero();
            for (int k = 1; k <= n; ++k) s = F->add(s, F->mul(c[k], r.c[n - k]));
            r.c[n] = F->neg(F->mul(s, i0));
        }
        return r;
    }
};

// value and derivative, for newton steps
struct Dual {
    Series v, d;
    Dual operator+(const Dual& b) const { return {v + b.v, d + b.d}; }
    Dual operator-(const Dual& b) const { return {v - b.v, d - b.d}; }
    Dual operator*(const Dual& b) const { return {v * b.v, v * b.d + d * b.v}; }
};

Series series_of(const RF& f, const FiniteField& F, int N, bool finite, uint32_t c)
{
    FqPoly num = f.num(), den = f.den();
    if (finite) {
        FqPoly sh(F, {c, 0});
        num = num.compose(sh);
        den = den.compose(sh);
    }
    auto conv = [&](const FqPoly& p) {
        Series s(F, N);
        for (int i = 0; i <= p.degree() && i < N; ++i) s.c[i] = p.raw(i);
        return s;
    };
    return conv(num) * conv(den).inv();
}

// a/b with deg a, deg b < N/2 and a/b = X mod s^N
bool reconstruct(const Series& X, FqPoly& a, FqPoly& b)
{
    const FiniteField& F = *X.F;
    const int N = X.N();
    FqPoly r0 = FqPoly::monomial(Fq(F, 0), N), r1(F, X.c);
    FqPoly t0(F), t1 = FqPoly::constant(F, 1);
    while (!r1.is_zero() && r1.degree() >= N / 2) {
        FqPoly q, r;
        r0.divmod(r1, q, r);
        FqPoly t2 = t0 - q * t1;
        r0 = std::move(r1);
        r1 = std::move(r);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (t1.is_zero() || t1.degree() >= N / 2 || t1.raw(0) == F.zero()) return false;
    a = r1;
    b = t1;
    return true;
}

CurvePoint from_frame(const CurvePoint& Q, const Transform& T)
{
    if (Q.inf) return Q;
    RF u2 = T.u * T.u;
    return CurvePoint::affine(u2 * Q.x + T.r, u2 * T.u * Q.y + u2 * T.s * Q.x + T.t);
}

// small affine group law over a finite field
struct RedCurve {
    const FiniteField& R;
    std::array<uint32_t, 5> a;
    struct Pt {
        bool inf = true;
        uint32_t x = 0, y = 0;
    };
    Pt add(const Pt& P, const Pt& Q) const
    {
        if (P.inf) return Q;
        if (Q.inf) return P;
        uint32_t lam;
        if (P.x == Q.x) {
            uint32_t d = R.add(R.add(R.mul(R.from_int(2), P.y), R.mul(a[0], P.x)), a[2]);
            if (P.y != Q.y || d == R.zero()) return Pt{};
            uint32_t n = R.sub(R.add(R.add(R.mul(R.from_int(3), R.mul(P.x, P.x)), R.mul(R.from_int(2), R.mul(a[1], P.x))),
                                     a[3]),
                               R.mul(a[0], P.y));
            lam = R.div(n, d);
        } else {
            lam = R.div(R.sub(Q.y, P.y), R.sub(Q.x, P.x));
        }
        uint32_t nu = R.sub(P.y, R.mul(lam, P.x));
        uint32_t x3 = R.sub(R.sub(R.sub(R.add(R.mul(lam, lam), R.mul(a[0], lam)), a[1]), P.x), Q.x);
        uint32_t y3 = R.sub(R.sub(R.neg(R.mul(R.add(lam, a[0]), x3)), nu), a[2]);
        return Pt{false, x3, y3};
    }
    int64_t order(const Pt& P, int64_t cap) const
    {
        Pt Q = P;
        for (int64_t k = 1; k <= cap; ++k) {
            if (Q.inf) return k;
            Q = add(Q, P);
        }
        return -1;
    }
    std::vector<Pt> points() const
    {
        std::vector<Pt> out;
        out.push_back(Pt{});
        for (uint32_t c = 0; c < R.q(); ++c) {
            uint32_t x = R.from_code(c);
            uint32_t h = R.add(R.mul(a[0], x), a[2]);
            uint32_t g = R.add(R.mul(R.add(R.mul(R.add(x, a[1]), x), a[3]), x), a[4]);
            FqPoly f(R, {R.neg(g), h, 0});
            for (auto& y : roots(f)) out.push_back(Pt{false, x, y.raw()});
        }
        return out;
    }
};

// newton lift of a reduced point of exact order n (p not dividing n) to
// a global point, if one exists
std::optional<CurvePoint> lift_torsion(const EllipticCurveFF& E, const ReductionData& rd, uint32_t c, int64_t n,
                                       uint32_t x0, uint32_t y0, int64_t degree_bound)
{
    const FiniteField& F = E.field();
    const bool finite = !rd.place.infinite;
    const Weierstrass& W = rd.model;
    // rational reconstruction needs more than twice the degree
    // x' = (x - r) / u^2 in the frame of the lifting place
    auto fdeg = [](const RF& f) { return f.is_zero() ? 0 : std::max(f.num().degree(), f.den().degree()); };
    const int64_t need = 2 * (degree_bound + fdeg(rd.transform.r) + 2 * fdeg(rd.transform.u)) + 8;
    for (int N = 16; N <= 512; N *= 2) {
        if (N / 2 >= need) break;
        std::array<Series, 5> A{Series(F, N), Series(F, N), Series(F, N), Series(F, N), Series(F, N)};
        for (int i = 0; i < 5; ++i) A[i] = series_of(W.a[i], F, N, finite, c);
        auto K = [&](int64_t k) { return Series::constant(F, N, F.from_int(k)); };
        Series b2 = A[0] * A[0] + K(4) * A[1];
        Series b4 = K(2) * A[3] + A[0] * A[2];
        Series b6 = A[2] * A[2] + K(4) * A[4];
        Series b8 = A[0] * A[0] * A[4] + K(4) * A[1] * A[4] - A[0] * A[2] * A[3] + A[1] * A[2] * A[2] - A[3] * A[3];
        auto cst = [&](const Series& s) { return Dual{s, Series(F, N)}; };

        // the x-only division polynomial whose simple roots contain x(T)
        auto fpoly = [&](const Dual& x) -> Dual {
            Dual x2 = x * x, x3 = x2 * x;
            Dual B = cst(K(4)) * x3 + cst(b2) * x2 + cst(K(2) * b4) * x + cst(b6);
            if (n == 2) return B;
            Dual B2 = B * B;
            std::vector<Dual> f(n + 3, cst(Series(F, N)));
            f[1] = cst(K(1));
            f[2] = cst(K(1));
            Dual x4 = x2 * x2;
            f[3] = cst(K(3)) * x4 + cst(b2) * x3 + cst(K(3) * b4) * x2 + cst(K(3) * b6) * x + cst(b8);
            Dual x5 = x4 * x, x6 = x3 * x3;
            f[4] = cst(K(2)) * x6 + cst(b2) * x5 + cst(K(5) * b4) * x4 + cst(K(10) * b6) * x3 +
                   cst(K(10) * b8) * x2 + cst(b2 * b8 - b4 * b6) * x + cst(b4 * b8 - b6 * b6);
            for (int64_t k = 5; k <= n; ++k) {
                int64_t m = k / 2;
                if (k % 2) {
                    if (m % 2 == 0)
                        f[k] = B2 * f[m + 2] * f[m] * f[m] * f[m] - f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
                    else
                        f[k] = f[m + 2] * f[m] * f[m] * f[m] - B2 * f[m - 1] * f[m + 1] * f[m + 1] * f[m + 1];
                } else {
                    f[k] = f[m] * (f[m + 2] * f[m - 1] * f[m - 1] - f[m - 2] * f[m + 1] * f[m + 1]);
                }
            }
            return f[n];
        };

        Series X = Series::constant(F, N, x0);
        bool ok = true;
        for (int it = 0; it < 40; ++it) {
            Series e(F, N);
            e.c[1] = F.one();
            Dual xd{X, Series::constant(F, N, F.one())};
            Dual r = fpoly(xd);
            if (r.d.c[0] == F.zero()) {
                ok = false;
                break;
            }
            Series nx = X - r.v * r.d.inv();
            if (nx.c == X.c) break;
            X = nx;
        }
        if (!ok) return std::nullopt;
        // y from the curve equation
        Series h = A[0] * X + A[2];
        Series g = ((X + A[1]) * X + A[3]) * X + A[4];
        Series Y = Series::constant(F, N, y0);
        uint32_t d0 = F.add(F.mul(F.from_int(2), y0), h.c[0]);
        if (d0 == F.zero()) {
            if (F.p() == 2) return std::nullopt;
            Y = (h).scale(F.neg(F.inv(F.from_int(2))));
        } else {
            for (int it = 0; it < 40; ++it) {
                Series val = Y * Y + h * Y - g;
                Series der = Y.scale(F.from_int(2)) + h;
                Series ny = Y - val * der.inv();
                if (ny.c == Y.c) break;
                Y = ny;
            }
        }
        FqPoly xa, xb, ya, yb;
        if (!reconstruct(X, xa, xb) || !reconstruct(Y, ya, yb)) continue;
        auto back = [&](const FqPoly& p) {
            return finite ? p.compose(FqPoly(F, {F.neg(c), 0})) : p;
        };
        RF xl(back(xa), back(xb)), yl(back(ya), back(yb));
        CurvePoint Q = from_frame(CurvePoint::affine(xl, yl), rd.transform);
        if (!finite) Q = CurvePoint::affine(Q.x.at_infinity(), Q.y.at_infinity());
        if (E.on_curve(Q) && E.mul(Q, n).inf) return Q;
    }
    return std::nullopt;
}

// torsion points have height zero, which bounds the pole divisor of x:
// sum_v deg(v) * (largest local term at v + poles the change of model adds)
int64_t torsion_x_degree_bound(const EllipticCurveFF& E)
{
    int64_t B12 = 0;  // in twelfths
    for (auto& rd : E.local_data()) {
        int64_t c12 = 0;
        int n = rd.type.n;
        switch (rd.type.kind) {
        case KodairaType::In: c12 = 3 * n; break;
        case KodairaType::I0s: c12 = 12; break;
        case KodairaType::Ins: c12 = 12 + 3 * n; break;
        case KodairaType::III: c12 = 6; break;
        case KodairaType::IIIs: c12 = 18; break;
        case KodairaType::IV: c12 = 8; break;
        case KodairaType::IVs: c12 = 16; break;
        default: break;
        }
        int vu = rd.transform.u.is_zero() ? 0 : valuation(rd.transform.u, rd.local_place);
        int vr = rd.transform.r.is_zero() ? 0 : valuation(rd.transform.r, rd.local_place);
        B12 += rd.place.degree * (c12 + 12 * (2 * std::max(0, -vu) + std::max(0, -vr)));
    }
    return (B12 + 11) / 12;
}

int64_t p_part(int64_t n, int64_t p)
{
    int64_t r = 1;
    while (n % p == 0) {
        n /= p;
        r *= p;
    }
    return r;
}

}  // namespace

int64_t torsion_bound(const EllipticCurveFF& E)
{
    // all degree one places and a few of degrees two and three: residue
    // fields of a single degree can share torsion that K does not have
    const FiniteField& F = E.field();
    int64_t g = 0;
    int used = 0, stable = 0;
    for (int deg = 1; deg <= 4; ++deg) {
        if (ipow(F.q(), unsigned(deg)) > (1u << 20)) break;
        std::vector<Place> ps = places_of_degree(F, deg);
        if (deg == 1) ps.push_back(Place::infinity(F));
        int here = 0;
        for (auto& v : ps) {
            const ReductionData* rd = E.local_at(v);
            if (rd && !rd->good()) continue;
            int64_t cnt = int64_t(count_points_reduced(E, v));
            int64_t ng = std::gcd(g, cnt);
            stable = ng == g ? stable + 1 : 0;
            g = ng;
            ++used;
            ++here;
            if (deg == 1 && here >= 64) break;
            if (deg > 1 && here >= 8) break;
        }
        if (deg >= 3 && stable >= 4) break;
    }
    if (g == 0) throw Error("no good places available for a torsion bound");
    return g;
}

TorsionInfo torsion(const EllipticCurveFF& E)
{
    const FiniteField& F = E.field();
    const int64_t p = F.p();
    TorsionInfo info;
    info.bound = torsion_bound(E);
    int64_t bprime = info.bound / p_part(info.bound, p);

    std::vector<CurvePoint> prime_to_p{CurvePoint::zero()};
    if (bprime > 1) {
        // a good place of degree one for lifting
        std::optional<ReductionData> rd;
        uint32_t c = 0;
        std::vector<Place> ps = places_of_degree(F, 1);
        ps.push_back(Place::infinity(F));
        for (auto& v : ps) {
            const ReductionData* d = E.local_at(v);
            ReductionData cand = d ? *d : classify_reduction(E, v);
            if (!cand.good()) continue;
            rd = cand;
            if (!v.infinite) c = F.neg(v.poly.raw(0));
            break;
        }
        if (!rd) throw Error("torsion: no good place of degree one");
        const FiniteField& R = residue_field(rd->local_place);
        RedCurve Cb{R, reduced_model(*rd, 1)};
        const int64_t dbound = torsion_x_degree_bound(E);
        for (auto& P : Cb.points()) {
            if (P.inf) continue;
            int64_t ord = Cb.order(P, bprime);
            if (ord < 0 || bprime % ord) continue;
            auto Q = lift_torsion(E, *rd, c, ord, P.x, P.y, dbound);
            if (Q) prime_to_p.push_back(*Q);
        }
    }

    // p-torsion: explicit in characteristic 2, where it is the locus 2y + a1 x + a3 = 0
    std::vector<CurvePoint> ppart{CurvePoint::zero()};
    if (p == 2 && info.bound % 2 == 0 && !E.model().a1().is_zero()) {
        const Weierstrass& W = E.model();
        RF x = W.a3() / W.a1();
        RF g = ((x + W.a2()) * x + W.a4()) * x + W.a6();
        FqPoly nd = g.num() * g.den();
        bool sq = true;
        for (int i = 1; i <= nd.degree(); i += 2)
            if (nd.raw(i) != F.zero()) sq = false;
        if (sq) {
            RF y = RF(pth_root(nd), g.den());
            CurvePoint T = CurvePoint::affine(x, y);
            if (E.on_curve(T)) ppart.push_back(T);
        }
    }
    for (auto& A : ppart)
        for (auto& B : prime_to_p) info.points.push_back(E.add(A, B));
    info.order = int64_t(info.points.size());
    int64_t pfound = p_part(info.order, p), pbound = p_part(info.bound, p);
    info.p_part_exact = pbound == 1 || (p == 2 && pfound == pbound);
    if (p == 2 && pfound > 1 && pfound < pbound) info.p_part_exact = false;

    // invariant factors from the exponent (torsion is generated by two elements)
    int64_t expo = 1;
    for (auto& P : info.points) {
        int64_t k = 1;
        CurvePoint Q = P;
        while (!Q.inf) {
            Q = E.add(Q, P);
            ++k;
        }
        expo = std::lcm(expo, k);
    }
    if (info.order / expo > 1) info.structure.push_back(info.order / expo);
    if (expo > 1) info.structure.push_back(expo);
    return info;
}

}  // namespace ellff
