#include <algorithm>
#include <map>

#include "ellff/curves.hpp"

namespace ellff {

namespace {

using RF = RationalFunction;

constexpr int kInfVal = 1 << 29;

// the local ring at a place of F_q[t] (or at s = 0 for infinity), with
// reduction to and lifting from the residue field
struct LocalRing {
    const FiniteField& F;
    Place lp;
    const FiniteField& R;
    RF pi;
    int e;
    // lifting matrix: inverse of the F_p-coordinate matrix of gamma_j theta^i
    std::vector<std::vector<uint32_t>> inv;
    std::vector<uint32_t> fbasis;

    explicit LocalRing(const Place& v)
        : F(v.base()), lp(v), R(residue_field(v)), pi(RF(v.poly)), e(v.degree)
    {
        if (e > 1) build_lift();
    }

    int val(const RF& f) const { return f.is_zero() ? kInfVal : valuation(f, lp); }
    uint32_t red(const RF& f) const { return reduce_at(f, lp).raw(); }
    // reduction of f / pi^k
    uint32_t red(const RF& f, int k) const { return f.is_zero() ? R.zero() : red(f / pi.pow(k)); }
    Fq el(uint32_t a) const { return Fq(R, a); }

    void build_lift()
    {
        const uint32_t p = F.p(), n = R.m();
        const Embedding& emb = embedding(F, R);
        uint32_t th = place_root(lp).raw();
        for (uint32_t j = 0; j < F.m(); ++j) fbasis.push_back(F.from_code(uint32_t(ipow(p, j))));
        // columns indexed by i*m + j
        std::vector<std::vector<uint32_t>> M(n, std::vector<uint32_t>(2 * n, 0));
        for (int i = 0; i < e; ++i)
            for (uint32_t j = 0; j < F.m(); ++j) {
                uint32_t c = R.code(R.mul(emb(fbasis[j]), R.pow(th, i)));
                for (uint32_t r = 0; r < n; ++r) {
                    M[r][i * F.m() + j] = c % p;
                    c /= p;
                }
            }
        for (uint32_t r = 0; r < n; ++r) M[r][n + r] = 1;
        auto inv_mod = [p](uint32_t a) {
            uint32_t r = 1;
            for (uint32_t k = 0; k < p - 2; ++k) r = r * a % p;
            return r;
        };
        for (uint32_t col = 0; col < n; ++col) {
            uint32_t piv = col;
            while (piv < n && M[piv][col] == 0) ++piv;
            if (piv == n) throw Error("internal: singular lifting matrix");
            std::swap(M[piv], M[col]);
            uint32_t iv = inv_mod(M[col][col]);
            for (auto& x : M[col]) x = x * iv % p;
            for (uint32_t r = 0; r < n; ++r) {
                if (r == col || M[r][col] == 0) continue;
                uint32_t f = M[r][col];
                for (uint32_t k = 0; k < 2 * n; ++k) M[r][k] = (M[r][k] + (p - f) * M[col][k]) % p;
            }
        }
        inv.assign(n, std::vector<uint32_t>(n));
        for (uint32_t r = 0; r < n; ++r)
            for (uint32_t k = 0; k < n; ++k) inv[r][k] = M[r][n + k];
    }

    // polynomial of degree < e reducing to a
    RF lift(uint32_t a) const
    {
        if (e == 1) return a == R.zero() ? RF(F) : RF::constant(Fq(F, a));
        const uint32_t p = F.p(), n = R.m();
        std::vector<uint32_t> d(n);
        uint32_t c = R.code(a);
        for (uint32_t r = 0; r < n; ++r) {
            d[r] = c % p;
            c /= p;
        }
        std::vector<uint32_t> coef(e, F.zero());
        for (uint32_t r = 0; r < n; ++r) {
            uint64_t s = 0;
            for (uint32_t k = 0; k < n; ++k) s += uint64_t(inv[r][k]) * d[k];
            s %= p;
            if (!s) continue;
            int i = int(r / F.m()), j = int(r % F.m());
            coef[i] = F.add(coef[i], F.mul(F.from_int(int64_t(s)), fbasis[j]));
        }
        return RF(FqPoly(F, coef));
    }

    FqPoly rpoly(std::vector<uint32_t> c) const { return FqPoly(R, std::move(c)); }
};

struct Work {
    Weierstrass W;
    Transform T;
    void apply(const RF& u, const RF& r, const RF& s, const RF& t)
    {
        W = W.transformed(u, r, s, t);
        T = T.then({u, r, s, t});
    }
};

// number of distinct roots in the residue field and whether a monic-ish
// polynomial over R splits completely
int count_roots(const FqPoly& f) { return int(roots(f).size()); }

// orbit sizes of frobenius on the roots of a separable polynomial over R
std::vector<int> root_orbits(const FqPoly& f)
{
    std::vector<int> out;
    for (auto& [g, e] : factor(f))
        for (int k = 0; k < e; ++k) out.push_back(g.degree());
    std::sort(out.begin(), out.end());
    return out;
}

bool find_singular_point(const LocalRing& L, const Weierstrass& W, uint32_t& x0, uint32_t& y0)
{
    const FiniteField& R = L.R;
    uint32_t a1 = L.red(W.a1()), a2 = L.red(W.a2()), a3 = L.red(W.a3()), a4 = L.red(W.a4()),
             a6 = L.red(W.a6());
    auto Fval = [&](uint32_t x, uint32_t y) {
        uint32_t lhs = R.add(R.mul(y, y), R.add(R.mul(a1, R.mul(x, y)), R.mul(a3, y)));
        uint32_t rhs = R.add(R.pow(x, 3), R.add(R.mul(a2, R.mul(x, x)), R.add(R.mul(a4, x), a6)));
        return R.sub(lhs, rhs);
    };
    if (R.p() == 2) {
        if (a1 != R.zero()) {
            x0 = R.div(a3, a1);
            y0 = R.div(R.add(R.mul(x0, x0), a4), a1);
        } else {
            if (a3 != R.zero()) return false;
            x0 = R.sqrt(a4);
            y0 = R.sqrt(R.add(R.pow(x0, 3), R.add(R.mul(a2, R.mul(x0, x0)), R.add(R.mul(a4, x0), a6))));
        }
        return Fval(x0, y0) == R.zero();
    }
    // y = -(a1 x + a3)/2 and x a multiple root of 4x^3 + b2 x^2 + 2 b4 x + b6
    uint32_t b2 = R.add(R.mul(a1, a1), R.mul(R.from_int(4), a2));
    uint32_t b4 = R.add(R.mul(R.from_int(2), a4), R.mul(a1, a3));
    uint32_t b6 = R.add(R.mul(a3, a3), R.mul(R.from_int(4), a6));
    FqPoly f = L.rpoly({b6, R.mul(R.from_int(2), b4), b2, R.from_int(4)});
    FqPoly g = gcd(f, f.derivative());
    if (f.derivative().is_zero()) g = f;
    auto rs = roots(g);
    uint32_t inv2 = R.inv(R.from_int(2));
    for (auto& r : rs) {
        uint32_t x = r.raw();
        uint32_t y = R.neg(R.mul(R.add(R.mul(a1, x), a3), inv2));
        if (Fval(x, y) == R.zero()) {
            x0 = x;
            y0 = y;
            return true;
        }
    }
    return false;
}

// fill type-dependent data once the Kodaira type and component data are known
void finish_multiplicative(ReductionData& rd, int n, bool split)
{
    rd.type = {KodairaType::In, n};
    rd.f_geom = n;
    rd.split = split ? 1 : 0;
    rd.cond_exponent = 1;
    rd.orbits.clear();
    if (split) {
        rd.c_v = n;
        rd.orbits.assign(n - 1, 1);
    } else {
        rd.c_v = n % 2 ? 1 : 2;
        // reflection of the n-gon fixing the identity component
        for (int i = 1; i < n - i; ++i) rd.orbits.push_back(2);
        if (n % 2 == 0) rd.orbits.push_back(1);
        std::sort(rd.orbits.begin(), rd.orbits.end());
    }
    rd.f_v = 1 + int(rd.orbits.size());
}

// orbits and component-group order for an additive type given the rational
// structure (number of rational roots / split flag)
void finish_additive(ReductionData& rd, const KodairaType& k, int c, std::vector<int> orbits)
{
    rd.type = k;
    rd.c_v = c;
    rd.f_geom = k.components();
    std::sort(orbits.begin(), orbits.end());
    rd.orbits = std::move(orbits);
    rd.f_v = 1 + int(rd.orbits.size());
    rd.split = -1;
}

std::vector<int> additive_orbits(const KodairaType& k, int c, bool split)
{
    switch (k.kind) {
    case KodairaType::II: return {};
    case KodairaType::III: return {1};
    case KodairaType::IV: return split ? std::vector<int>{1, 1} : std::vector<int>{2};
    case KodairaType::I0s:
        if (c == 4) return {1, 1, 1, 1};
        if (c == 2) return {1, 1, 2};
        return {1, 3};
    case KodairaType::Ins: {
        std::vector<int> o(k.n + 2, 1);
        if (split) {
            o.push_back(1);
            o.push_back(1);
        } else {
            o.push_back(2);
        }
        return o;
    }
    case KodairaType::IVs: return split ? std::vector<int>{1, 1, 1, 1, 1, 1} : std::vector<int>{1, 1, 2, 2};
    case KodairaType::IIIs: return std::vector<int>(7, 1);
    case KodairaType::IIs: return std::vector<int>(8, 1);
    default: return {};
    }
}

void apply_annotation(ReductionData& rd, const Annotation& a, int vdisc)
{
    const KodairaType& k = a.type;
    if (!k.additive()) throw InputError("annotation at " + a.place.str() + " must name an additive type");
    if (vdisc >= 12)
        throw UnclassifiedFiberError(a.place.str(), "model may be non-minimal at " + a.place.str() +
                                                        " (v(disc) >= 12); supply a minimal model");
    int c = 0;
    bool split = true;
    switch (k.kind) {
    case KodairaType::II: c = 1; break;
    case KodairaType::III: c = 2; break;
    case KodairaType::IIIs: c = 2; break;
    case KodairaType::IIs: c = 1; break;
    case KodairaType::IV:
    case KodairaType::IVs:
        if (a.split) split = *a.split;
        else if (a.c) split = *a.c == 3;
        else throw InputError("annotation at " + a.place.str() + " needs split= or c= for type " + k.str());
        c = split ? 3 : 1;
        break;
    case KodairaType::I0s:
        if (!a.c) throw InputError("annotation at " + a.place.str() + " needs c= for type I0*");
        c = *a.c;
        if (c != 1 && c != 2 && c != 4) throw InputError("c must be 1, 2 or 4 for I0*");
        break;
    case KodairaType::Ins:
        if (a.split) split = *a.split;
        else if (a.c) split = *a.c == 4;
        else throw InputError("annotation at " + a.place.str() + " needs split= or c= for type " + k.str());
        c = split ? 4 : 2;
        break;
    default: break;
    }
    if (a.c && *a.c != c) throw InputError("annotated c at " + a.place.str() + " inconsistent with its type");
    finish_additive(rd, k, c, additive_orbits(k, c, split));
    int m = k.components();
    int f = vdisc - m + 1;
    if (f < 2) throw InputError("annotation " + k.str() + " at " + a.place.str() + " inconsistent with v(disc)=" +
                                std::to_string(vdisc));
    rd.cond_exponent = f;
    rd.swan = f - 2;
    rd.annotated = true;
}

}  // namespace

ReductionData classify_reduction(const EllipticCurveFF& E, const Place& v)
{
    const FiniteField& F = E.field();
    ReductionData rd;
    rd.place = v;
    Place lp = v.infinite ? Place::finite(FqPoly::x(F)) : v;
    rd.local_place = lp;
    LocalRing L(lp);
    const FiniteField& R = L.R;
    const uint32_t p = F.p();

    Work w;
    w.W = v.infinite ? E.model().at_infinity() : E.model();
    w.T = Transform::identity(F);
    RF one = RF::constant(F, 1), zero(F);

    // integralize
    {
        static const int wt[5] = {1, 2, 3, 4, 6};
        int k = 0;
        for (int i = 0; i < 5; ++i) {
            int val = L.val(w.W.a[i]);
            if (val < 0) k = std::max(k, (-val + wt[i] - 1) / wt[i]);
        }
        if (k) w.apply(L.pi.pow(-k), zero, zero, zero);
    }

    auto a = [&](int i, int k) { return L.red(w.W.a[i], k); };  // a_{i,k}
    const int A2 = 1, A3 = 2, A4 = 3, A6 = 4;

    for (int iter = 0; iter < 64; ++iter) {
        int n = L.val(w.W.disc());
        rd.disc_valuation = n;
        if (n == 0) {
            rd.type = {KodairaType::I0, 0};
            break;
        }
        uint32_t x0, y0;
        if (!find_singular_point(L, w.W, x0, y0))
            throw Error("internal: no singular point on the reduction at " + v.str());
        w.apply(one, L.lift(x0), zero, L.lift(y0));

        if (L.val(w.W.b2()) == 0) {
            // multiplicative: tangents at the node T^2 + a1 T - a2
            uint32_t c1 = L.red(w.W.a1()), c2 = L.red(w.W.a2());
            FqPoly tan = L.rpoly({R.neg(c2), c1, 0});
            finish_multiplicative(rd, n, count_roots(tan) > 0);
            break;
        }

        if (p == 2 || p == 3) {
            const Annotation* ann = nullptr;
            for (auto& an : E.annotations())
                if (an.place == v) ann = &an;
            if (!ann)
                throw UnclassifiedFiberError(v.str(), "additive reduction at " + v.str() + " in characteristic " +
                                                          std::to_string(p) +
                                                          " needs an annotation (annotate " + v.str() +
                                                          ": type=...)");
            apply_annotation(rd, *ann, n);
            break;
        }

        rd.cond_exponent = 2;
        // step 3
        if (L.val(w.W.a6()) < 2) {
            finish_additive(rd, {KodairaType::II, 0}, 1, {});
            break;
        }
        // step 4
        if (L.val(w.W.b8()) < 3) {
            finish_additive(rd, {KodairaType::III, 0}, 2, {1});
            break;
        }
        // step 5
        if (L.val(w.W.b6()) < 3) {
            FqPoly q = L.rpoly({R.neg(a(A6, 2)), a(A3, 1), 0});
            bool split = count_roots(q) > 0;
            finish_additive(rd, {KodairaType::IV, 0}, split ? 3 : 1, additive_orbits({KodairaType::IV, 0}, 0, split));
            break;
        }
        // step 6: pi | a1, a2; pi^2 | a3, a4; pi^3 | a6
        {
            RF half = RF::constant(Fq(F, F.inv(F.from_int(2))));
            w.apply(one, zero, -(w.W.a1() * half), -(w.W.a3() * half));
        }
        FqPoly P = L.rpoly({a(A6, 3), a(A4, 2), a(A2, 1), 0});
        FqPoly dP = P.derivative();
        FqPoly g = gcd(P, dP);
        if (g.degree() == 0) {
            auto orb = root_orbits(P);
            int c = 1 + count_roots(P);
            orb.push_back(1);  // central component
            finish_additive(rd, {KodairaType::I0s, 0}, c, orb);
            break;
        }
        if (g.degree() == 1) {
            // double root: move it to 0, then the I_n* subprocedure
            uint32_t r0 = roots(g).front().raw();
            w.apply(one, L.lift(r0) * L.pi, zero, zero);
            int m = 1;
            bool split = false;
            for (int guard = 0; guard < 200; ++guard) {
                if (m % 2) {
                    int k = (m + 3) / 2;
                    FqPoly q = L.rpoly({R.neg(a(A6, 2 * k)), a(A3, k), 0});
                    if (gcd(q, q.derivative()).degree() == 0) {
                        split = count_roots(q) > 0;
                        break;
                    }
                    uint32_t rt = R.neg(R.mul(a(A3, k), R.inv(R.from_int(2))));
                    w.apply(one, zero, zero, L.lift(rt) * L.pi.pow(k));
                } else {
                    int k = (m + 2) / 2;
                    FqPoly q = L.rpoly({a(A6, 2 * k + 1), a(A4, k + 1), a(A2, 1)});
                    if (gcd(q, q.derivative()).degree() == 0) {
                        split = count_roots(q) > 0;
                        break;
                    }
                    uint32_t rt = R.neg(R.div(a(A4, k + 1), R.mul(R.from_int(2), a(A2, 1))));
                    w.apply(one, L.lift(rt) * L.pi.pow(k), zero, zero);
                }
                ++m;
            }
            KodairaType k{KodairaType::Ins, m};
            finish_additive(rd, k, split ? 4 : 2, additive_orbits(k, 0, split));
            break;
        }
        // triple root
        {
            uint32_t r0 = roots(P).front().raw();
            w.apply(one, L.lift(r0) * L.pi, zero, zero);
        }
        FqPoly q = L.rpoly({R.neg(a(A6, 4)), a(A3, 2), 0});
        if (gcd(q, q.derivative()).degree() == 0) {
            bool split = count_roots(q) > 0;
            KodairaType k{KodairaType::IVs, 0};
            finish_additive(rd, k, split ? 3 : 1, additive_orbits(k, 0, split));
            break;
        }
        {
            uint32_t rt = R.neg(R.mul(a(A3, 2), R.inv(R.from_int(2))));
            w.apply(one, zero, zero, L.lift(rt) * L.pi.pow(2));
        }
        if (L.val(w.W.a4()) < 4) {
            KodairaType k{KodairaType::IIIs, 0};
            finish_additive(rd, k, 2, additive_orbits(k, 2, true));
            break;
        }
        if (L.val(w.W.a6()) < 6) {
            KodairaType k{KodairaType::IIs, 0};
            finish_additive(rd, k, 1, additive_orbits(k, 1, true));
            break;
        }
        // non-minimal
        w.apply(L.pi, zero, zero, zero);
    }

    if (rd.type.additive() && !rd.annotated) {
        rd.swan = 0;
        int ogg = rd.disc_valuation - rd.f_geom + 1;
        if (ogg != rd.cond_exponent)
            throw VerificationError("Ogg's formula fails at " + v.str() + ": v(disc)=" +
                                    std::to_string(rd.disc_valuation) + " type " + rd.type.str());
    }
    if (rd.good()) {
        rd.c_v = 1;
        rd.f_geom = rd.f_v = 1;
        rd.cond_exponent = 0;
        rd.orbits.clear();
    }
    rd.model = w.W;
    rd.transform = w.T;
    rd.a_v = L.val(w.T.u);
    if (rd.good() && ipow(R.q(), 1) <= (1u << 22)) {
        auto red = reduced_model(rd, 1);
        rd.trace = int64_t(R.q()) + 1 - int64_t(count_cubic(R, red));
    }
    return rd;
}

}  // namespace ellff
