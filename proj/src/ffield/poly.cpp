#include <algorithm>
#include <sstream>

#include "ellff/ffield.hpp"

namespace ellff {

void FqPoly::normalize()
{
    if (!F_) return;
    while (!c_.empty() && c_.back() == F_->zero()) c_.pop_back();
}

FqPoly FqPoly::constant(const Fq& a)
{
    return FqPoly(a.field(), {a.raw()});
}

FqPoly FqPoly::constant(const FiniteField& F, int64_t n)
{
    return FqPoly(F, {F.from_int(n)});
}

FqPoly FqPoly::x(const FiniteField& F)
{
    return FqPoly(F, {F.zero(), 0});
}

FqPoly FqPoly::monomial(const Fq& a, int deg)
{
    const FiniteField& F = a.field();
    std::vector<uint32_t> c(deg + 1, F.zero());
    c[deg] = a.raw();
    return FqPoly(F, std::move(c));
}

void FqPoly::set_coeff(int i, const Fq& a)
{
    if (int(c_.size()) <= i) c_.resize(i + 1, F_->zero());
    c_[i] = a.raw();
    normalize();
}

static const FiniteField* same_field(const FqPoly& a, const FqPoly& b)
{
    if (a.field_ptr() && b.field_ptr() && a.field_ptr() != b.field_ptr())
        throw Error("mixing polynomials over different fields");
    return a.field_ptr() ? a.field_ptr() : b.field_ptr();
}

FqPoly FqPoly::operator+(const FqPoly& b) const
{
    const FiniteField* F = same_field(*this, b);
    const auto& bc = b.c_;
    std::vector<uint32_t> r(std::max(c_.size(), bc.size()), F->zero());
    for (size_t i = 0; i < r.size(); ++i)
        r[i] = F->add(i < c_.size() ? c_[i] : F->zero(), i < bc.size() ? bc[i] : F->zero());
    return FqPoly(*F, std::move(r));
}

FqPoly FqPoly::operator-() const
{
    std::vector<uint32_t> r(c_);
    for (auto& x : r) x = F_->neg(x);
    return FqPoly(*F_, std::move(r));
}

FqPoly FqPoly::operator-(const FqPoly& b) const
{
    return *this + (-b);
}

FqPoly FqPoly::operator*(const FqPoly& b) const
{
    const FiniteField* F = same_field(*this, b);
    if (c_.empty() || b.c_.empty()) return FqPoly(*F);
    const uint32_t Z = F->zero();
    std::vector<uint32_t> r(c_.size() + b.c_.size() - 1, Z);
    for (size_t i = 0; i < c_.size(); ++i) {
        uint32_t a = c_[i];
        if (a == Z) continue;
        for (size_t j = 0; j < b.c_.size(); ++j) {
            uint32_t bb = b.c_[j];
            if (bb == Z) continue;
            r[i + j] = F->add(r[i + j], F->mul(a, bb));
        }
    }
    return FqPoly(*F, std::move(r));
}

FqPoly FqPoly::operator*(const Fq& a) const
{
    if (&a.field() != F_) throw Error("mixing polynomials over different fields");
    std::vector<uint32_t> r(c_);
    for (auto& x : r) x = F_->mul(x, a.raw());
    return FqPoly(*F_, std::move(r));
}

bool FqPoly::operator<(const FqPoly& b) const
{
    if (degree() != b.degree()) return degree() < b.degree();
    for (int i = degree(); i >= 0; --i) {
        uint32_t x = F_->code(c_[i]), y = b.F_->code(b.c_[i]);
        if (x != y) return x < y;
    }
    return false;
}

void FqPoly::divmod(const FqPoly& b, FqPoly& quo, FqPoly& rem) const
{
    const FiniteField* F = same_field(*this, b);
    if (b.is_zero()) throw Error("polynomial division by zero");
    const uint32_t Z = F->zero();
    std::vector<uint32_t> r(c_);
    int db = b.degree();
    int dq = degree() - db;
    if (dq < 0) {
        quo = FqPoly(*F);
        rem = *this;
        return;
    }
    std::vector<uint32_t> qv(dq + 1, Z);
    uint32_t il = F->inv(b.c_[db]);
    for (int k = dq; k >= 0; --k) {
        uint32_t c = r[k + db];
        if (c == Z) continue;
        uint32_t f = F->mul(c, il);
        qv[k] = f;
        uint32_t nf = F->neg(f);
        for (int i = 0; i <= db; ++i) {
            if (b.c_[i] == Z) continue;
            r[k + i] = F->add(r[k + i], F->mul(nf, b.c_[i]));
        }
    }
    r.resize(db);
    quo = FqPoly(*F, std::move(qv));
    rem = FqPoly(*F, std::move(r));
}

FqPoly FqPoly::operator/(const FqPoly& b) const
{
    FqPoly q, r;
    divmod(b, q, r);
    if (!r.is_zero()) throw Error("inexact polynomial division");
    return q;
}

FqPoly FqPoly::operator%(const FqPoly& b) const
{
    FqPoly q, r;
    divmod(b, q, r);
    return r;
}

bool FqPoly::divisible_by(const FqPoly& b) const
{
    return (*this % b).is_zero();
}

FqPoly FqPoly::monic() const
{
    if (is_zero()) return *this;
    return *this * lead().inv();
}

FqPoly FqPoly::derivative() const
{
    if (c_.size() <= 1) return FqPoly(*F_);
    std::vector<uint32_t> r(c_.size() - 1);
    for (size_t i = 1; i < c_.size(); ++i) r[i - 1] = F_->mul(c_[i], F_->from_int(int64_t(i)));
    return FqPoly(*F_, std::move(r));
}

FqPoly FqPoly::pow(uint64_t e) const
{
    FqPoly r = constant(*F_, 1), b = *this;
    while (e) {
        if (e & 1) r = r * b;
        e >>= 1;
        if (e) b = b * b;
    }
    return r;
}

FqPoly FqPoly::powmod(const std::vector<uint8_t>& ebits, const FqPoly& mod) const
{
    // ebits: most significant first
    FqPoly r = constant(*F_, 1) % mod, b = *this % mod;
    for (uint8_t bit : ebits) {
        r = (r * r) % mod;
        if (bit) r = (r * b) % mod;
    }
    return r;
}

FqPoly FqPoly::powmod(uint64_t e, const FqPoly& mod) const
{
    FqPoly r = constant(*F_, 1) % mod, b = *this % mod;
    while (e) {
        if (e & 1) r = (r * b) % mod;
        e >>= 1;
        if (e) b = (b * b) % mod;
    }
    return r;
}

FqPoly FqPoly::shift(int k) const
{
    if (is_zero()) return *this;
    std::vector<uint32_t> r(k, F_->zero());
    r.insert(r.end(), c_.begin(), c_.end());
    return FqPoly(*F_, std::move(r));
}

FqPoly FqPoly::inflate(int d) const
{
    if (is_zero()) return *this;
    std::vector<uint32_t> r(size_t(degree()) * d + 1, F_->zero());
    for (size_t i = 0; i < c_.size(); ++i) r[i * d] = c_[i];
    return FqPoly(*F_, std::move(r));
}

FqPoly FqPoly::reversed(int deg) const
{
    if (deg < degree()) throw Error("reversal degree too small");
    std::vector<uint32_t> r(deg + 1, F_->zero());
    for (int i = 0; i <= degree(); ++i) r[deg - i] = c_[i];
    return FqPoly(*F_, std::move(r));
}

FqPoly FqPoly::compose(const FqPoly& g) const
{
    FqPoly r(*F_);
    for (int i = degree(); i >= 0; --i) r = r * g + constant(coeff(i));
    return r;
}

FqPoly FqPoly::mapped(const Embedding& e) const
{
    if (e.from != F_) throw Error("embedding source mismatch");
    std::vector<uint32_t> r(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) r[i] = e(c_[i]);
    return FqPoly(*e.to, std::move(r));
}

Fq FqPoly::eval(const Fq& a) const
{
    if (&a.field() != F_) throw Error("mixing polynomials over different fields");
    uint32_t acc = F_->zero();
    for (int i = degree(); i >= 0; --i) acc = F_->add(F_->mul(acc, a.raw()), c_[i]);
    return Fq(*F_, acc);
}

uint32_t FqPoly::eval_raw(const FiniteField& big, const Embedding& emb, uint32_t a) const
{
    uint32_t acc = big.zero();
    for (int i = degree(); i >= 0; --i) acc = big.add(big.mul(acc, a), emb(c_[i]));
    return acc;
}

std::string FqPoly::str(const char* var) const
{
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (int i = degree(); i >= 0; --i) {
        uint32_t c = c_[i];
        if (c == F_->zero()) continue;
        std::string cs = F_->to_string(c);
        if (!first) os << "+";
        first = false;
        if (i == 0) {
            os << cs;
            continue;
        }
        if (c != 0) os << cs << "*";
        os << var;
        if (i > 1) os << "^" << i;
    }
    return os.str();
}

size_t FqPoly::hash() const
{
    uint64_t h = 1469598103934665603ull;
    for (uint32_t x : c_) {
        h ^= x;
        h *= 1099511628211ull;
    }
    return size_t(h);
}

FqPoly gcd(FqPoly a, FqPoly b)
{
    while (!b.is_zero()) {
        FqPoly r = a % b;
        a = std::move(b);
        b = std::move(r);
    }
    return a.monic();
}

FqPoly xgcd(const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t)
{
    const FiniteField& F = a.field_ptr() ? a.field() : b.field();
    FqPoly r0 = a, r1 = b;
    FqPoly s0 = FqPoly::constant(F, 1), s1(F), t0(F), t1 = FqPoly::constant(F, 1);
    while (!r1.is_zero()) {
        FqPoly q, r;
        r0.divmod(r1, q, r);
        r0 = std::move(r1);
        r1 = std::move(r);
        FqPoly ns = s0 - q * s1, nt = t0 - q * t1;
        s0 = std::move(s1);
        s1 = std::move(ns);
        t0 = std::move(t1);
        t1 = std::move(nt);
    }
    if (r0.is_zero()) {
        s = s0;
        t = t0;
        return r0;
    }
    Fq li = r0.lead().inv();
    s = s0 * li;
    t = t0 * li;
    return r0 * li;
}

FqPoly invmod(const FqPoly& a, const FqPoly& m)
{
    FqPoly s, t;
    FqPoly g = xgcd(a % m, m, s, t);
    if (!g.is_one()) throw Error("polynomial not invertible modulo " + m.str());
    return s % m;
}

}  // namespace ellff
