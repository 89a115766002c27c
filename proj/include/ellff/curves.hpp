#pragma once

// elliptic curves over F_q(t) in long Weierstrass form, their group law,
// local reduction data and point counts over residue fields.

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "ellff/ffield.hpp"

namespace ellff {

struct KodairaType {
    enum Kind { I0, In, II, III, IV, I0s, Ins, IVs, IIIs, IIs };
    Kind kind = I0;
    int n = 0;  // for I_n and I_n*

    std::string str() const;
    static KodairaType parse(const std::string& s);
    int components() const;  // geometric number of components
    bool additive() const { return kind != I0 && kind != In; }
    bool operator==(const KodairaType& o) const { return kind == o.kind && n == o.n; }
};

// Weierstrass coefficients a1,a2,a3,a4,a6 with the usual covariants
struct Weierstrass {
    std::array<RationalFunction, 5> a;

    const RationalFunction& a1() const { return a[0]; }
    const RationalFunction& a2() const { return a[1]; }
    const RationalFunction& a3() const { return a[2]; }
    const RationalFunction& a4() const { return a[3]; }
    const RationalFunction& a6() const { return a[4]; }
    RationalFunction b2() const;
    RationalFunction b4() const;
    RationalFunction b6() const;
    RationalFunction b8() const;
    RationalFunction c4() const;
    RationalFunction c6() const;
    RationalFunction disc() const;

    // x = u^2 x' + r, y = u^3 y' + u^2 s x' + t
    Weierstrass transformed(const RationalFunction& u, const RationalFunction& r,
                            const RationalFunction& s, const RationalFunction& t) const;
    Weierstrass at_infinity() const;
    Weierstrass mapped(const Embedding& e) const;
    Weierstrass inflate(int d) const;
};

// change of coordinates, composable
struct Transform {
    RationalFunction u, r, s, t;
    static Transform identity(const FiniteField& F);
    // apply this then b
    Transform then(const Transform& b) const;
};

struct CurvePoint {
    bool inf = true;
    RationalFunction x, y;

    static CurvePoint zero() { return CurvePoint(); }
    static CurvePoint affine(const RationalFunction& x, const RationalFunction& y)
    {
        CurvePoint P;
        P.inf = false;
        P.x = x;
        P.y = y;
        return P;
    }
    bool operator==(const CurvePoint& o) const
    {
        return inf == o.inf && (inf || (x == o.x && y == o.y));
    }
    std::string str() const;
    CurvePoint in_frame(const Transform& T) const;  // coordinates after T
};

// user-supplied classification of an additive fiber in residue char 2 or 3
struct Annotation {
    Place place;
    KodairaType type;
    std::optional<int> c;
    std::optional<bool> split;
    std::string str() const;
};

struct ReductionData {
    Place place;
    KodairaType type;
    int disc_valuation = 0;  // of a minimal model
    int c_v = 1;
    int f_geom = 1;
    int f_v = 1;
    int split = -1;  // -1 n/a, 0 non-split, 1 split
    int cond_exponent = 0;
    int swan = 0;
    int a_v = 0;  // pi^a_v * omega is Neron
    std::optional<int64_t> trace;
    bool annotated = false;
    // frobenius orbit sizes on the non-identity geometric components
    std::vector<int> orbits;

    // local data: minimal model in the local variable (t, or s = 1/t at
    // infinity) and the transform from the user model in that variable
    Weierstrass model;
    Transform transform;
    Place local_place;

    bool good() const { return type.kind == KodairaType::I0; }
    bool multiplicative() const { return type.kind == KodairaType::In; }
    // frobenius trace A over the degree-k extension of the residue field
    // (1 split, (-1)^k non-split, 0 additive); bad places only
    int64_t bad_trace(int k) const;
    std::string str() const;
};

class EllipticCurveFF;

struct KummerInfo {
    std::shared_ptr<const EllipticCurveFF> base;
    int d = 1;
};

class EllipticCurveFF {
public:
    EllipticCurveFF(const Weierstrass& w, std::vector<Annotation> ann = {});
    static EllipticCurveFF from_coeffs(const FiniteField& F, const std::array<RationalFunction, 5>& a,
                                       std::vector<Annotation> ann = {});

    const FiniteField& field() const { return w_.a1().field(); }
    const Weierstrass& model() const { return w_; }
    const RationalFunction& disc() const { return disc_; }
    const RationalFunction& j() const { return j_; }
    const std::vector<Annotation>& annotations() const { return ann_; }
    const std::optional<KummerInfo>& kummer() const { return kummer_; }
    void set_kummer(const KummerInfo& k) { kummer_ = k; }

    bool on_curve(const CurvePoint& P) const;
    CurvePoint neg(const CurvePoint& P) const;
    CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const;
    CurvePoint mul(const CurvePoint& P, int64_t n) const;

    // canonical text form (cache key) and its 64-bit FNV-1a hash in hex
    std::string canonical() const;
    std::string hash() const;

    // all places where the user model is bad, non-integral or non-minimal,
    // plus infinity; sorted, infinity last.  computed once.
    const std::vector<ReductionData>& local_data() const;
    std::vector<ReductionData> bad_places() const;
    const ReductionData* local_at(const Place& v) const;

    // integral model over F_q[t]: a_i * D^i, minimal at finite places not
    // listed in local_data() with a nontrivial transform
    const std::array<FqPoly, 5>& integral_coeffs() const { return aint_; }

private:
    Weierstrass w_;
    RationalFunction disc_, j_;
    std::vector<Annotation> ann_;
    std::optional<KummerInfo> kummer_;
    std::array<FqPoly, 5> aint_;

    struct Lazy {
        std::once_flag once;
        std::vector<ReductionData> data;
        std::exception_ptr err;
    };
    std::shared_ptr<Lazy> lazy_;
};

ReductionData classify_reduction(const EllipticCurveFF& E, const Place& v);

struct Conductor {
    std::vector<std::pair<Place, int>> exponents;
    int degree = 0;
    int degree_prime = 0;  // part prime to t and infinity
};
Conductor conductor(const EllipticCurveFF& E);

// projective points on y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over R,
// coefficients given as raw elements of R
uint64_t count_cubic(const FiniteField& R, const std::array<uint32_t, 5>& a);
// same by enumerating pairs (x, y); slow, independent
uint64_t count_cubic_pairs(const FiniteField& R, const std::array<uint32_t, 5>& a);
// reduced minimal model at v as raw elements of F_{q_v^k}
std::array<uint32_t, 5> reduced_model(const ReductionData& rd, int k = 1);

// number of k_v-points of the reduced minimal model (singular points
// included at bad v); sets the trace for good v when rd is given
uint64_t count_points_reduced(const EllipticCurveFF& E, const Place& v);
// frobenius trace q_v^k + 1 - #E(F_{q_v^k}) at a good place
int64_t good_trace(const ReductionData& rd, int k);

// reduction of a global point at a good place, as raw elements; returns
// false for the point at infinity
bool reduce_point(const EllipticCurveFF& E, const CurvePoint& P, const Place& v, uint32_t& x, uint32_t& y);

struct TorsionInfo {
    int64_t bound = 0;  // prime-to-p bound from good reductions
    std::vector<CurvePoint> points;  // explicit torsion points found (including O)
    int64_t order = 0;
    std::vector<int64_t> structure;  // invariant factors
    bool p_part_exact = true;
};
int64_t torsion_bound(const EllipticCurveFF& E);
TorsionInfo torsion(const EllipticCurveFF& E);

class HyperellipticCurveFF {
public:
    HyperellipticCurveFF(int g, std::vector<RationalFunction> rhs);
    int genus() const { return g_; }
    const std::vector<RationalFunction>& rhs() const { return rhs_; }
    const FiniteField& field() const { return rhs_.front().field(); }

private:
    int g_;
    std::vector<RationalFunction> rhs_;
};
uint64_t count_points_hyperelliptic(const HyperellipticCurveFF& X, const Place& v);

// text input.  expressions use t, integers and z (the field generator);
// curve text is "a1=..,a2=.." or one assignment per line, with optional
// lines "annotate <place>: type=<kodaira> [c=<n>] [split=yes|no]"
RationalFunction parse_rational(const std::string& s, const FiniteField& F);
Place parse_place(const std::string& s, const FiniteField& F);
EllipticCurveFF parse_curve(const std::string& text, const FiniteField& F);
CurvePoint parse_point(const std::string& s, const FiniteField& F);

}  // namespace ellff
