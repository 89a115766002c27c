#pragma once

// finite fields F_{p^m}, polynomials over them, rational functions in one
// variable and places of F_q(t).
//
// field elements are stored by discrete logarithm with respect to a fixed
// generator g; zero is the sentinel value q-1.  addition goes through a
// Zech table.  this makes the inner point-counting loops cheap and the
// quadratic character a parity test.

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "ellff/errors.hpp"

namespace ellff {

class FiniteField {
public:
    // registry access; fields are built once and live for the program
    static const FiniteField& get(uint32_t p, uint32_t m);
    static uint64_t size_limit();

    uint32_t p() const { return p_; }
    uint32_t m() const { return m_; }
    uint32_t q() const { return q_; }
    uint32_t zero() const { return z_; }
    static constexpr uint32_t one() { return 0; }

    // modulus coefficients c_0..c_{m-1}; the modulus is x^m + sum c_i x^i
    const std::vector<uint32_t>& modulus() const { return modulus_; }
    uint32_t generator_code() const { return gen_code_; }

    uint32_t mul(uint32_t a, uint32_t b) const
    {
        if (a == z_ || b == z_) return z_;
        uint32_t s = a + b;
        return s >= z_ ? s - z_ : s;
    }
    uint32_t add(uint32_t a, uint32_t b) const
    {
        if (a == z_) return b;
        if (b == z_) return a;
        uint32_t d = b >= a ? b - a : b + z_ - a;
        uint32_t w = zech_[d];
        if (w == z_) return z_;
        w += a;
        return w >= z_ ? w - z_ : w;
    }
    uint32_t neg(uint32_t a) const
    {
        if (a == z_ || p_ == 2) return a;
        uint32_t s = a + half_;
        return s >= z_ ? s - z_ : s;
    }
    uint32_t sub(uint32_t a, uint32_t b) const { return add(a, neg(b)); }
    uint32_t inv(uint32_t a) const;
    uint32_t div(uint32_t a, uint32_t b) const { return mul(a, inv(b)); }
    uint32_t pow(uint32_t a, int64_t e) const;

    // +1, -1, 0; odd characteristic only
    int chi(uint32_t a) const { return a == z_ ? 0 : ((a & 1u) ? -1 : 1); }
    // absolute trace to F_2 of a; characteristic 2 only
    int trace2(uint32_t a) const;
    bool is_square(uint32_t a) const;
    uint32_t sqrt(uint32_t a) const;  // throws if not a square
    uint32_t frob(uint32_t a) const { return a == z_ ? z_ : uint32_t((uint64_t)a * p_ % z_); }

    uint32_t from_int(int64_t n) const;
    uint32_t from_code(uint32_t code) const { return log_[code]; }
    uint32_t code(uint32_t a) const { return a == z_ ? 0 : exp_[a]; }
    // element of the prime field, returned as 0..p-1, or -1
    int64_t prime_value(uint32_t a) const;

    // primitive d-th root of unity g^((q-1)/d); requires d | q-1
    uint32_t zeta(uint32_t d) const;
    uint32_t order_of(uint32_t a) const;

    std::string to_string(uint32_t a) const;
    std::string name() const;

    FiniteField(const FiniteField&) = delete;
    FiniteField& operator=(const FiniteField&) = delete;

private:
    FiniteField(uint32_t p, uint32_t m);
    void build();

    uint32_t p_, m_, q_, z_, half_;
    std::vector<uint32_t> modulus_;
    uint32_t gen_code_ = 0;
    std::vector<uint32_t> exp_, log_, zech_;
    uint32_t trace_mask_ = 0;
};

// canonical embedding F_{p^a} -> F_{p^b}; a | b.  the image of the small
// generator is g_small(theta) for the least-log root theta of the small
// modulus, so logs are simply multiplied by a constant.
struct Embedding {
    const FiniteField* from;
    const FiniteField* to;
    uint64_t factor;  // log multiplier

    uint32_t operator()(uint32_t a) const
    {
        if (a == from->zero()) return to->zero();
        return uint32_t((uint64_t)a * factor % to->zero());
    }
    // inverse on the image; returns false if b is not in the subfield
    bool pull(uint32_t b, uint32_t& out) const;
};

const Embedding& embedding(const FiniteField& from, const FiniteField& to);

// value type pairing an element with its field
class Fq {
public:
    Fq() : F_(nullptr), v_(0) {}
    Fq(const FiniteField& F, uint32_t v) : F_(&F), v_(v) {}
    static Fq from_int(const FiniteField& F, int64_t n) { return Fq(F, F.from_int(n)); }

    const FiniteField& field() const { return *F_; }
    uint32_t raw() const { return v_; }
    bool is_zero() const { return v_ == F_->zero(); }
    bool is_one() const { return v_ == 0; }

    Fq operator+(const Fq& b) const { check(b); return Fq(*F_, F_->add(v_, b.v_)); }
    Fq operator-(const Fq& b) const { check(b); return Fq(*F_, F_->sub(v_, b.v_)); }
    Fq operator*(const Fq& b) const { check(b); return Fq(*F_, F_->mul(v_, b.v_)); }
    Fq operator/(const Fq& b) const { check(b); return Fq(*F_, F_->div(v_, b.v_)); }
    Fq operator-() const { return Fq(*F_, F_->neg(v_)); }
    Fq& operator+=(const Fq& b) { return *this = *this + b; }
    Fq& operator-=(const Fq& b) { return *this = *this - b; }
    Fq& operator*=(const Fq& b) { return *this = *this * b; }
    bool operator==(const Fq& b) const { return F_ == b.F_ && v_ == b.v_; }
    bool operator!=(const Fq& b) const { return !(*this == b); }
    Fq inv() const { return Fq(*F_, F_->inv(v_)); }
    Fq pow(int64_t e) const { return Fq(*F_, F_->pow(v_, e)); }
    std::string str() const { return F_->to_string(v_); }

private:
    void check(const Fq& b) const;
    const FiniteField* F_;
    uint32_t v_;
};

// dense polynomial, coefficients in log form, no leading zeros
class FqPoly {
public:
    FqPoly() : F_(nullptr) {}
    explicit FqPoly(const FiniteField& F) : F_(&F) {}
    FqPoly(const FiniteField& F, std::vector<uint32_t> c) : F_(&F), c_(std::move(c)) { normalize(); }
    static FqPoly constant(const Fq& a);
    static FqPoly constant(const FiniteField& F, int64_t n);
    static FqPoly x(const FiniteField& F);
    static FqPoly monomial(const Fq& a, int deg);

    const FiniteField& field() const { return *F_; }
    const FiniteField* field_ptr() const { return F_; }
    int degree() const { return int(c_.size()) - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == 0; }
    bool is_constant() const { return c_.size() <= 1; }
    uint32_t raw(int i) const { return i < int(c_.size()) && i >= 0 ? c_[i] : F_->zero(); }
    Fq coeff(int i) const { return Fq(*F_, raw(i)); }
    Fq lead() const { return coeff(degree()); }
    const std::vector<uint32_t>& raw_coeffs() const { return c_; }
    void set_coeff(int i, const Fq& a);

    FqPoly operator+(const FqPoly& b) const;
    FqPoly operator-(const FqPoly& b) const;
    FqPoly operator*(const FqPoly& b) const;
    FqPoly operator*(const Fq& a) const;
    FqPoly operator-() const;
    FqPoly& operator+=(const FqPoly& b) { return *this = *this + b; }
    FqPoly& operator-=(const FqPoly& b) { return *this = *this - b; }
    FqPoly& operator*=(const FqPoly& b) { return *this = *this * b; }
    bool operator==(const FqPoly& b) const { return F_ == b.F_ && c_ == b.c_; }
    bool operator!=(const FqPoly& b) const { return !(*this == b); }
    bool operator<(const FqPoly& b) const;  // degree, then coefficients from the top

    // euclidean division; b nonzero
    void divmod(const FqPoly& b, FqPoly& quo, FqPoly& rem) const;
    FqPoly operator/(const FqPoly& b) const;  // exact division, throws otherwise
    FqPoly operator%(const FqPoly& b) const;
    bool divisible_by(const FqPoly& b) const;

    FqPoly monic() const;
    FqPoly derivative() const;
    FqPoly pow(uint64_t e) const;
    FqPoly powmod(const std::vector<uint8_t>& ebits, const FqPoly& mod) const;
    FqPoly powmod(uint64_t e, const FqPoly& mod) const;
    FqPoly shift(int k) const;  // multiply by t^k
    // t -> t^d
    FqPoly inflate(int d) const;
    // t^deg * f(1/t) for a given deg >= degree()
    FqPoly reversed(int deg) const;
    FqPoly compose(const FqPoly& g) const;
    // coefficients mapped through an embedding
    FqPoly mapped(const Embedding& e) const;

    Fq eval(const Fq& a) const;
    // evaluate at an element of a larger field via the canonical embedding
    uint32_t eval_raw(const FiniteField& big, const Embedding& emb, uint32_t a) const;

    std::string str(const char* var = "t") const;
    size_t hash() const;

private:
    void normalize();
    const FiniteField* F_;
    std::vector<uint32_t> c_;
};

FqPoly gcd(FqPoly a, FqPoly b);
// a*s + b*t = g monic
FqPoly xgcd(const FqPoly& a, const FqPoly& b, FqPoly& s, FqPoly& t);
// inverse of a modulo m (coprime)
FqPoly invmod(const FqPoly& a, const FqPoly& m);

bool is_irreducible(const FqPoly& f);
// squarefree decomposition and full factorization into monic irreducibles
std::vector<std::pair<FqPoly, int>> squarefree_decomposition(const FqPoly& f);
std::vector<std::pair<FqPoly, int>> factor(const FqPoly& f);
std::vector<Fq> roots(const FqPoly& f);
// p-th root of a polynomial whose exponents are all divisible by p
FqPoly pth_root(const FqPoly& f);
// square root when f is a square in F_q[t] (odd q); false otherwise
bool poly_sqrt(const FqPoly& f, FqPoly& out);

class RationalFunction {
public:
    RationalFunction() = default;
    explicit RationalFunction(const FiniteField& F);
    RationalFunction(const FqPoly& num);
    RationalFunction(const FqPoly& num, const FqPoly& den);
    static RationalFunction constant(const FiniteField& F, int64_t n);
    static RationalFunction constant(const Fq& a);
    static RationalFunction t(const FiniteField& F);

    const FiniteField& field() const { return num_.field(); }
    const FqPoly& num() const { return num_; }
    const FqPoly& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_one() const { return num_.is_one() && den_.is_one(); }
    bool is_poly() const { return den_.is_one(); }
    bool is_constant() const { return num_.is_constant() && den_.is_one(); }

    RationalFunction operator+(const RationalFunction& b) const;
    RationalFunction operator-(const RationalFunction& b) const;
    RationalFunction operator*(const RationalFunction& b) const;
    RationalFunction operator/(const RationalFunction& b) const;
    RationalFunction operator-() const;
    RationalFunction& operator+=(const RationalFunction& b) { return *this = *this + b; }
    RationalFunction& operator-=(const RationalFunction& b) { return *this = *this - b; }
    RationalFunction& operator*=(const RationalFunction& b) { return *this = *this * b; }
    bool operator==(const RationalFunction& b) const { return num_ == b.num_ && den_ == b.den_; }
    bool operator!=(const RationalFunction& b) const { return !(*this == b); }
    RationalFunction inv() const;
    RationalFunction pow(int64_t e) const;
    RationalFunction scaled(const Fq& a) const;

    // f(t^d)
    RationalFunction inflate(int d) const;
    // f(1/s) written in the variable s
    RationalFunction at_infinity() const;
    RationalFunction mapped(const Embedding& e) const;

    std::string str(const char* var = "t") const;

private:
    void canonicalize();
    FqPoly num_, den_;
};

struct Place {
    bool infinite = false;
    FqPoly poly;  // monic irreducible; empty at infinity
    int degree = 1;

    static Place finite(const FqPoly& p);
    static Place infinity(const FiniteField& F);
    const FiniteField& base() const { return poly.field(); }
    std::string str() const;
    bool operator==(const Place& b) const;
    bool operator<(const Place& b) const;  // infinity last
};

// monic irreducibles of exact degree n, in increasing order
std::vector<Place> places_of_degree(const FiniteField& F, int n);
// all finite places of degree <= max_degree, then infinity
std::vector<Place> enumerate_places(const FiniteField& F, int max_degree);
// number of monic irreducibles of degree n over F_q by Moebius inversion
uint64_t count_irreducibles(uint64_t q, int n);

int valuation(const FqPoly& f, const Place& v);
int valuation(const RationalFunction& f, const Place& v);
// residue field F_{q^deg v} and the chosen root of v in it
const FiniteField& residue_field(const Place& v);
Fq place_root(const Place& v);
Fq reduce_at(const RationalFunction& f, const Place& v);

uint64_t ipow(uint64_t b, unsigned e);
bool is_prime(uint64_t n);
std::vector<uint64_t> prime_factors(uint64_t n);
uint64_t multiplicative_order(uint64_t q, uint64_t d);

}  // namespace ellff
