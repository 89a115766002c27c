#include <algorithm>
#include <map>
#include <mutex>

#include "ellff/ffield.hpp"

namespace ellff {

RationalFunction::RationalFunction(const FiniteField& F)
    : num_(F), den_(FqPoly::constant(F, 1)) {}

RationalFunction::RationalFunction(const FqPoly& num)
    : num_(num), den_(FqPoly::constant(num.field(), 1)) {}

RationalFunction::RationalFunction(const FqPoly& num, const FqPoly& den)
    : num_(num), den_(den)
{
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    canonicalize();
}

RationalFunction RationalFunction::constant(const FiniteField& F, int64_t n)
{
    return RationalFunction(FqPoly::constant(F, n));
}

RationalFunction RationalFunction::constant(const Fq& a)
{
    return RationalFunction(FqPoly::constant(a));
}

RationalFunction RationalFunction::t(const FiniteField& F)
{
    return RationalFunction(FqPoly::x(F));
}

void RationalFunction::canonicalize()
{
    if (num_.is_zero()) {
        den_ = FqPoly::constant(den_.field(), 1);
        return;
    }
    if (!den_.is_constant()) {
        FqPoly g = gcd(num_, den_);
        if (!g.is_one()) {
            num_ = num_ / g;
            den_ = den_ / g;
        }
    }
    Fq l = den_.lead();
    if (!l.is_one()) {
        Fq li = l.inv();
        num_ = num_ * li;
        den_ = den_ * li;
    }
}

RationalFunction RationalFunction::operator+(const RationalFunction& b) const
{
    if (den_ == b.den_) return RationalFunction(num_ + b.num_, den_);
    return RationalFunction(num_ * b.den_ + b.num_ * den_, den_ * b.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& b) const
{
    if (den_ == b.den_) return RationalFunction(num_ - b.num_, den_);
    return RationalFunction(num_ * b.den_ - b.num_ * den_, den_ * b.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& b) const
{
    if (den_.is_one() && b.den_.is_one()) {
        RationalFunction r;
        r.num_ = num_ * b.num_;
        r.den_ = den_;
        return r;
    }
    // cross-cancel first to keep degrees down
    FqPoly g1 = gcd(num_, b.den_), g2 = gcd(b.num_, den_);
    RationalFunction r;
    r.num_ = (num_ / g1) * (b.num_ / g2);
    r.den_ = (den_ / g2) * (b.den_ / g1);
    if (r.num_.is_zero()) r.den_ = FqPoly::constant(field(), 1);
    return r;
}

RationalFunction RationalFunction::inv() const
{
    if (is_zero()) throw Error("inverse of zero rational function");
    return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& b) const
{
    return *this * b.inv();
}

RationalFunction RationalFunction::operator-() const
{
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

RationalFunction RationalFunction::pow(int64_t e) const
{
    if (e < 0) return inv().pow(-e);
    RationalFunction r;
    r.num_ = num_.pow(uint64_t(e));
    r.den_ = den_.pow(uint64_t(e));
    return r;
}

RationalFunction RationalFunction::scaled(const Fq& a) const
{
    RationalFunction r;
    r.num_ = num_ * a;
    r.den_ = den_;
    if (r.num_.is_zero()) r.den_ = FqPoly::constant(field(), 1);
    return r;
}

RationalFunction RationalFunction::inflate(int d) const
{
    RationalFunction r;
    r.num_ = num_.inflate(d);
    r.den_ = den_.inflate(d);
    return r;
}

RationalFunction RationalFunction::at_infinity() const
{
    if (is_zero()) return *this;
    int dn = num_.degree(), dd = den_.degree();
    FqPoly n = num_.reversed(dn), d = den_.reversed(dd);
    if (dd >= dn)
        n = n.shift(dd - dn);
    else
        d = d.shift(dn - dd);
    return RationalFunction(n, d);
}

RationalFunction RationalFunction::mapped(const Embedding& e) const
{
    RationalFunction r;
    r.num_ = num_.mapped(e);
    r.den_ = den_.mapped(e);
    return r;
}

std::string RationalFunction::str(const char* var) const
{
    auto wrap = [&](const FqPoly& p) {
        std::string s = p.str(var);
        bool simple = p.degree() <= 0 || s.find('+') == std::string::npos;
        return simple ? s : "(" + s + ")";
    };
    if (den_.is_one()) return num_.str(var);
    return wrap(num_) + "/" + wrap(den_);
}

Place Place::finite(const FqPoly& p)
{
    Place v;
    v.infinite = false;
    v.poly = p.monic();
    v.degree = p.degree();
    return v;
}

Place Place::infinity(const FiniteField& F)
{
    Place v;
    v.infinite = true;
    v.poly = FqPoly(F);
    v.degree = 1;
    return v;
}

std::string Place::str() const
{
    return infinite ? std::string("inf") : poly.str();
}

bool Place::operator==(const Place& b) const
{
    return infinite == b.infinite && (infinite || poly == b.poly);
}

bool Place::operator<(const Place& b) const
{
    if (infinite != b.infinite) return !infinite;
    if (infinite) return false;
    return poly < b.poly;
}

uint64_t count_irreducibles(uint64_t q, int n)
{
    auto mu = [](int k) {
        int r = 1;
        for (int d = 2; d * d <= k; ++d) {
            if (k % d == 0) {
                k /= d;
                if (k % d == 0) return 0;
                r = -r;
            }
        }
        if (k > 1) r = -r;
        return r;
    };
    int64_t s = 0;
    for (int d = 1; d <= n; ++d)
        if (n % d == 0) s += mu(d) * int64_t(ipow(q, n / d));
    return uint64_t(s / n);
}

std::vector<Place> places_of_degree(const FiniteField& F, int n)
{
    std::vector<Place> out;
    const uint32_t q = F.q();
    if (n == 1) {
        for (uint32_t c = 0; c < q; ++c) {
            uint32_t a = F.from_code(c);
            out.push_back(Place::finite(FqPoly(F, {F.neg(a), 0})));
        }
        std::sort(out.begin(), out.end());
        return out;
    }
    uint64_t total = ipow(q, n);
    std::vector<uint32_t> coef(n + 1);
    for (uint64_t k = 0; k < total; ++k) {
        uint64_t c = k;
        for (int i = 0; i < n; ++i) {
            coef[i] = F.from_code(uint32_t(c % q));
            c /= q;
        }
        coef[n] = 0;
        if (coef[0] == F.zero()) continue;
        FqPoly f(F, coef);
        if (is_irreducible(f)) out.push_back(Place::finite(f));
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Place> enumerate_places(const FiniteField& F, int max_degree)
{
    if (max_degree < 1) throw InputError("max_degree must be at least 1");
    std::vector<Place> out;
    for (int n = 1; n <= max_degree; ++n) {
        auto v = places_of_degree(F, n);
        out.insert(out.end(), v.begin(), v.end());
    }
    out.push_back(Place::infinity(F));
    return out;
}

int valuation(const FqPoly& f, const Place& v)
{
    if (f.is_zero()) throw Error("valuation of zero");
    if (v.infinite) return -f.degree();
    int k = 0;
    FqPoly g = f;
    for (;;) {
        FqPoly q, r;
        g.divmod(v.poly, q, r);
        if (!r.is_zero()) break;
        g = std::move(q);
        ++k;
    }
    return k;
}

int valuation(const RationalFunction& f, const Place& v)
{
    if (f.is_zero()) throw Error("valuation of zero");
    if (v.infinite) return f.den().degree() - f.num().degree();
    return valuation(f.num(), v) - valuation(f.den(), v);
}

const FiniteField& residue_field(const Place& v)
{
    const FiniteField& F = v.base();
    return FiniteField::get(F.p(), F.m() * uint32_t(v.degree));
}

Fq place_root(const Place& v)
{
    const FiniteField& R = residue_field(v);
    if (v.infinite) throw Error("place_root at infinity");
    static std::mutex mu;
    static std::map<std::pair<const FiniteField*, std::vector<uint32_t>>, uint32_t> cache;
    auto key = std::make_pair(&v.base(), v.poly.raw_coeffs());
    {
        std::lock_guard lk(mu);
        auto it = cache.find(key);
        if (it != cache.end()) return Fq(R, it->second);
    }
    FqPoly big = v.poly.mapped(embedding(v.base(), R));
    auto rs = roots(big);
    if (rs.empty()) throw Error("internal: place has no root in its residue field");
    uint32_t th = rs.front().raw();
    std::lock_guard lk(mu);
    cache[key] = th;
    return Fq(R, th);
}

Fq reduce_at(const RationalFunction& f, const Place& v)
{
    const FiniteField& R = residue_field(v);
    if (f.is_zero()) return Fq(R, R.zero());
    int val = valuation(f, v);
    if (val < 0) throw PoleError("pole of " + f.str() + " at " + v.str());
    if (val > 0) return Fq(R, R.zero());
    if (v.infinite) {
        // degrees equal: ratio of leading coefficients
        return f.num().lead() / f.den().lead();
    }
    const Embedding& e = embedding(v.base(), R);
    uint32_t th = place_root(v).raw();
    uint32_t n = f.num().eval_raw(R, e, th), d = f.den().eval_raw(R, e, th);
    return Fq(R, R.div(n, d));
}

}  // namespace ellff
