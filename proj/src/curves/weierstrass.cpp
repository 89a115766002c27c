#include <algorithm>
#include <cstdio>
#include <sstream>

#include "ellff/curves.hpp"

namespace ellff {

std::string KodairaType::str() const
{
    switch (kind) {
    case I0: return "I0";
    case In: return "I" + std::to_string(n);
    case II: return "II";
    case III: return "III";
    case IV: return "IV";
    case I0s: return "I0*";
    case Ins: return "I" + std::to_string(n) + "*";
    case IVs: return "IV*";
    case IIIs: return "III*";
    case IIs: return "II*";
    }
    return "?";
}

KodairaType KodairaType::parse(const std::string& s)
{
    KodairaType k;
    if (s == "II") k.kind = II;
    else if (s == "III") k.kind = III;
    else if (s == "IV") k.kind = IV;
    else if (s == "II*") k.kind = IIs;
    else if (s == "III*") k.kind = IIIs;
    else if (s == "IV*") k.kind = IVs;
    else if (s.size() >= 2 && s[0] == 'I') {
        bool star = s.back() == '*';
        std::string num = s.substr(1, s.size() - 1 - (star ? 1 : 0));
        if (num.empty() || num.find_first_not_of("0123456789") != std::string::npos)
            throw InputError("unknown Kodaira type '" + s + "'");
        k.n = std::stoi(num);
        if (star) k.kind = k.n == 0 ? I0s : Ins;
        else k.kind = k.n == 0 ? I0 : In;
    } else {
        throw InputError("unknown Kodaira type '" + s + "'");
    }
    return k;
}

int KodairaType::components() const
{
    switch (kind) {
    case I0: return 1;
    case In: return n;
    case II: return 1;
    case III: return 2;
    case IV: return 3;
    case I0s: return 5;
    case Ins: return n + 5;
    case IVs: return 7;
    case IIIs: return 8;
    case IIs: return 9;
    }
    return 0;
}

RationalFunction Weierstrass::b2() const
{
    return a1() * a1() + a2().scaled(Fq::from_int(a2().field(), 4));
}

RationalFunction Weierstrass::b4() const
{
    return a4().scaled(Fq::from_int(a4().field(), 2)) + a1() * a3();
}

RationalFunction Weierstrass::b6() const
{
    return a3() * a3() + a6().scaled(Fq::from_int(a6().field(), 4));
}

RationalFunction Weierstrass::b8() const
{
    const FiniteField& F = a1().field();
    return a1() * a1() * a6() + (a2() * a6()).scaled(Fq::from_int(F, 4)) - a1() * a3() * a4() +
           a2() * a3() * a3() - a4() * a4();
}

RationalFunction Weierstrass::c4() const
{
    RationalFunction B2 = b2();
    return B2 * B2 - b4().scaled(Fq::from_int(B2.field(), 24));
}

RationalFunction Weierstrass::c6() const
{
    RationalFunction B2 = b2(), B4 = b4(), B6 = b6();
    const FiniteField& F = B2.field();
    return -(B2 * B2 * B2) + (B2 * B4).scaled(Fq::from_int(F, 36)) - B6.scaled(Fq::from_int(F, 216));
}

RationalFunction Weierstrass::disc() const
{
    RationalFunction B2 = b2(), B4 = b4(), B6 = b6(), B8 = b8();
    const FiniteField& F = B2.field();
    return -(B2 * B2 * B8) - (B4 * B4 * B4).scaled(Fq::from_int(F, 8)) - (B6 * B6).scaled(Fq::from_int(F, 27)) +
           (B2 * B4 * B6).scaled(Fq::from_int(F, 9));
}

Weierstrass Weierstrass::transformed(const RationalFunction& u, const RationalFunction& r,
                                     const RationalFunction& s, const RationalFunction& t) const
{
    const FiniteField& F = a1().field();
    auto k = [&](int n) { return Fq::from_int(F, n); };
    Weierstrass w;
    RationalFunction ui = u.inv();
    RationalFunction u2 = ui * ui, u3 = u2 * ui, u4 = u2 * u2, u6 = u3 * u3;
    w.a[0] = (a1() + s.scaled(k(2))) * ui;
    w.a[1] = (a2() - s * a1() + r.scaled(k(3)) - s * s) * u2;
    w.a[2] = (a3() + r * a1() + t.scaled(k(2))) * u3;
    w.a[3] = (a4() - s * a3() + (r * a2()).scaled(k(2)) - (t + r * s) * a1() + (r * r).scaled(k(3)) -
              (s * t).scaled(k(2))) *
             u4;
    w.a[4] = (a6() + r * a4() + r * r * a2() + r * r * r - t * a3() - t * t - r * t * a1()) * u6;
    return w;
}

Weierstrass Weierstrass::at_infinity() const
{
    Weierstrass w;
    for (int i = 0; i < 5; ++i) w.a[i] = a[i].at_infinity();
    return w;
}

Weierstrass Weierstrass::mapped(const Embedding& e) const
{
    Weierstrass w;
    for (int i = 0; i < 5; ++i) w.a[i] = a[i].mapped(e);
    return w;
}

Weierstrass Weierstrass::inflate(int d) const
{
    Weierstrass w;
    for (int i = 0; i < 5; ++i) w.a[i] = a[i].inflate(d);
    return w;
}

Transform Transform::identity(const FiniteField& F)
{
    return {RationalFunction::constant(F, 1), RationalFunction(F), RationalFunction(F), RationalFunction(F)};
}

Transform Transform::then(const Transform& b) const
{
    Transform c;
    RationalFunction u2 = u * u;
    c.u = u * b.u;
    c.r = r + u2 * b.r;
    c.s = s + u * b.s;
    c.t = t + u2 * u * b.t + u2 * s * b.r;
    return c;
}

std::string CurvePoint::str() const
{
    if (inf) return "O";
    return "(" + x.str() + ", " + y.str() + ")";
}

CurvePoint CurvePoint::in_frame(const Transform& T) const
{
    if (inf) return *this;
    RationalFunction ui = T.u.inv();
    RationalFunction xr = x - T.r;
    return affine(xr * ui * ui, (y - T.s * xr - T.t) * ui * ui * ui);
}

std::string Annotation::str() const
{
    std::string s = "annotate " + place.str() + ": type=" + type.str();
    if (c) s += " c=" + std::to_string(*c);
    if (split) s += std::string(" split=") + (*split ? "yes" : "no");
    return s;
}

int64_t ReductionData::bad_trace(int k) const
{
    if (type.kind == KodairaType::In) return split == 1 ? 1 : (k % 2 ? -1 : 1);
    if (good()) throw Error("bad_trace at a good place");
    return 0;
}

std::string ReductionData::str() const
{
    std::ostringstream os;
    os << place.str() << ": " << type.str() << " vD=" << disc_valuation << " c=" << c_v << " f=" << f_v << "/"
       << f_geom << " cond=" << cond_exponent;
    if (split >= 0) os << (split ? " split" : " non-split");
    if (swan) os << " swan=" << swan;
    if (a_v) os << " a=" << a_v;
    if (annotated) os << " (annotated)";
    return os.str();
}

EllipticCurveFF::EllipticCurveFF(const Weierstrass& w, std::vector<Annotation> ann)
    : w_(w), ann_(std::move(ann)), lazy_(std::make_shared<Lazy>())
{
    const FiniteField& F = w_.a1().field();
    for (auto& c : w_.a)
        if (&c.field() != &F) throw InputError("coefficients over different fields");
    disc_ = w_.disc();
    if (disc_.is_zero()) throw InputError("singular Weierstrass model (discriminant 0)");
    RationalFunction c4 = w_.c4();
    j_ = c4 * c4 * c4 / disc_;
    std::sort(ann_.begin(), ann_.end(), [](const Annotation& a, const Annotation& b) { return a.place < b.place; });

    // integral model over F_q[t]: scale by D = prod pi^k over finite poles
    FqPoly D = FqPoly::constant(F, 1);
    std::vector<FqPoly> poles;
    for (auto& c : w_.a)
        for (auto& [g, e] : factor(c.den())) poles.push_back(g);
    std::sort(poles.begin(), poles.end());
    poles.erase(std::unique(poles.begin(), poles.end()), poles.end());
    for (auto& g : poles) {
        Place v = Place::finite(g);
        int k = 0;
        for (int i = 0; i < 5; ++i) {
            static const int w8[5] = {1, 2, 3, 4, 6};
            if (w_.a[i].is_zero()) continue;
            int val = valuation(w_.a[i], v);
            if (val < 0) k = std::max(k, (-val + w8[i] - 1) / w8[i]);
        }
        D = D * g.pow(k);
    }
    RationalFunction Dr(D);
    static const int w8[5] = {1, 2, 3, 4, 6};
    for (int i = 0; i < 5; ++i) {
        RationalFunction c = w_.a[i] * Dr.pow(w8[i]);
        if (!c.is_poly()) throw Error("internal: integral model construction failed");
        aint_[i] = c.num();
    }
}

EllipticCurveFF EllipticCurveFF::from_coeffs(const FiniteField& F, const std::array<RationalFunction, 5>& a,
                                             std::vector<Annotation> ann)
{
    Weierstrass w;
    for (int i = 0; i < 5; ++i) w.a[i] = a[i].num().field_ptr() ? a[i] : RationalFunction(F);
    return EllipticCurveFF(w, std::move(ann));
}

bool EllipticCurveFF::on_curve(const CurvePoint& P) const
{
    if (P.inf) return true;
    const auto& x = P.x;
    const auto& y = P.y;
    RationalFunction lhs = y * y + w_.a1() * x * y + w_.a3() * y;
    RationalFunction rhs = x * x * x + w_.a2() * x * x + w_.a4() * x + w_.a6();
    return lhs == rhs;
}

CurvePoint EllipticCurveFF::neg(const CurvePoint& P) const
{
    if (P.inf) return P;
    return CurvePoint::affine(P.x, -P.y - w_.a1() * P.x - w_.a3());
}

CurvePoint EllipticCurveFF::add(const CurvePoint& P, const CurvePoint& Q) const
{
    if (P.inf) return Q;
    if (Q.inf) return P;
    const FiniteField& F = field();
    RationalFunction lambda;
    if (P.x == Q.x) {
        RationalFunction d = P.y.scaled(Fq::from_int(F, 2)) + w_.a1() * P.x + w_.a3();
        if (P.y != Q.y || d.is_zero()) return CurvePoint::zero();
        RationalFunction n = (P.x * P.x).scaled(Fq::from_int(F, 3)) + (w_.a2() * P.x).scaled(Fq::from_int(F, 2)) +
                             w_.a4() - w_.a1() * P.y;
        lambda = n / d;
    } else {
        lambda = (Q.y - P.y) / (Q.x - P.x);
    }
    RationalFunction nu = P.y - lambda * P.x;
    RationalFunction x3 = lambda * lambda + w_.a1() * lambda - w_.a2() - P.x - Q.x;
    RationalFunction y3 = -(lambda + w_.a1()) * x3 - nu - w_.a3();
    return CurvePoint::affine(x3, y3);
}

CurvePoint EllipticCurveFF::mul(const CurvePoint& P, int64_t n) const
{
    if (n < 0) return mul(neg(P), -n);
    CurvePoint R = CurvePoint::zero(), B = P;
    while (n) {
        if (n & 1) R = add(R, B);
        n >>= 1;
        if (n) B = add(B, B);
    }
    return R;
}

std::string EllipticCurveFF::canonical() const
{
    std::ostringstream os;
    const FiniteField& F = field();
    os << "F=" << F.p() << "^" << F.m();
    static const char* names[5] = {"a1", "a2", "a3", "a4", "a6"};
    for (int i = 0; i < 5; ++i) os << ";" << names[i] << "=" << w_.a[i].str();
    for (auto& a : ann_) os << ";" << a.str();
    return os.str();
}

std::string EllipticCurveFF::hash() const
{
    uint64_t h = 1469598103934665603ull;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
    return buf;
}

const ReductionData* EllipticCurveFF::local_at(const Place& v) const
{
    for (auto& rd : local_data())
        if (rd.place == v) return &rd;
    return nullptr;
}

std::vector<ReductionData> EllipticCurveFF::bad_places() const
{
    std::vector<ReductionData> out;
    for (auto& rd : local_data())
        if (!rd.good()) out.push_back(rd);
    return out;
}

const std::vector<ReductionData>& EllipticCurveFF::local_data() const
{
    Lazy& L = *lazy_;
    std::call_once(L.once, [&] {
        try {
            const FiniteField& F = field();
            std::vector<FqPoly> cand;
            for (auto& [g, e] : factor(disc_.num())) cand.push_back(g);
            for (auto& c : w_.a)
                for (auto& [g, e] : factor(c.den())) cand.push_back(g);
            std::sort(cand.begin(), cand.end());
            cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
            std::vector<Place> places;
            for (auto& g : cand) places.push_back(Place::finite(g));
            places.push_back(Place::infinity(F));
            for (auto& v : places) {
                ReductionData rd = classify_reduction(*this, v);
                if (!rd.good() || rd.a_v != 0 || v.infinite) L.data.push_back(std::move(rd));
            }
        } catch (...) {
            L.err = std::current_exception();
        }
    });
    if (L.err) std::rethrow_exception(L.err);
    return L.data;
}

Conductor conductor(const EllipticCurveFF& E)
{
    Conductor c;
    for (auto& rd : E.local_data()) {
        if (rd.good()) continue;
        c.exponents.push_back({rd.place, rd.cond_exponent});
        c.degree += rd.cond_exponent * rd.place.degree;
        bool zero = !rd.place.infinite && rd.place.poly == FqPoly::x(E.field());
        if (!zero && !rd.place.infinite) c.degree_prime += rd.cond_exponent * rd.place.degree;
    }
    return c;
}

}  // namespace ellff
