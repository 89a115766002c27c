#pragma once

// canonical heights, Mordell-Weil lattices, Tamagawa numbers and the
// refined BSD / Shioda-Tate bookkeeping.
//
// heights are exact rationals in units of log q.  the pairing is the
// Neron-Tate one with <P,P> = h(P) and <P,Q> obtained by polarization.

#include <string>
#include <vector>

#include "ellff/curves.hpp"
#include "ellff/lfunc.hpp"

namespace ellff {

using QMatrix = std::vector<std::vector<mpq_class>>;
using ZVector = std::vector<mpz_class>;

struct HeightParts {
    int chi = 0;
    mpq_class intersection;  // (P.O), degree weighted
    struct Local {
        Place place;
        mpq_class contr;
    };
    std::vector<Local> contributions;  // bad places with a nonzero term
    mpq_class height;
};
// h(P) = 2 chi + 2 (P.O) - sum_v deg(v) contr_v(P)
HeightParts height_parts(const EllipticCurveFF& E, const CurvePoint& P);
mpq_class canonical_height(const EllipticCurveFF& E, const CurvePoint& P);
mpq_class height_pairing(const EllipticCurveFF& E, const CurvePoint& P, const CurvePoint& Q);

// degree of the pole divisor of x(P)
int64_t naive_height(const EllipticCurveFF& E, const CurvePoint& P);
// lcm of the denominators the local terms can produce
int64_t height_denominator(const EllipticCurveFF& E);

struct TelescopeResult {
    mpq_class value;  // nearest rational with the allowed denominator
    bool stable = false;
    int steps = 0;
    std::vector<mpq_class> terms;  // h(2^n P) / 4^n
};
// lim h(2^n P)/4^n, stopping once the rounded value repeats or the
// coordinates reach max_degree
TelescopeResult telescoping_height(const EllipticCurveFF& E, const CurvePoint& P, int max_steps = 8,
                                   int max_degree = 4000);

struct MWLattice {
    std::vector<CurvePoint> points;
    QMatrix gram;
    int rank = 0;
    std::vector<ZVector> kernel;  // saturated Z-basis of the integer relations
    std::vector<ZVector> basis;   // coefficient vectors of a basis of the span mod kernel
    QMatrix reduced_gram;         // gram on that basis
    mpq_class regulator_prime;    // det of reduced_gram
};
MWLattice build_lattice(const EllipticCurveFF& E, const std::vector<CurvePoint>& points);
// rank over Q and exact determinant helpers
int rank_of(const QMatrix& M);
mpq_class det_of(const QMatrix& M);
// true if the rational span of the vectors equals the kernel's
bool same_span(const std::vector<ZVector>& a, const std::vector<ZVector>& b);

struct ShiodaTate {
    int mw_rank = 0;
    int trivial_rank = 2;  // 2 + sum (f_v - 1)
    int ns_rank = 0;
    std::vector<std::pair<Place, int>> breakdown;  // f_v - 1 per bad place
    int zeta_order = -1;  // -ord_{s=1} zeta(X, s) from P2, when given
    bool consistent = true;
};
ShiodaTate shioda_tate_check(const EllipticCurveFF& E, int mw_rank, const SurfaceZeta* Z = nullptr);

struct TamagawaData {
    struct Local {
        Place place;
        int a_v = 0;
        int c_v = 1;
    };
    std::vector<Local> places;
    int exponent = 1;  // of q: 1 + sum deg(v) a_v
    mpq_class tau;
};
TamagawaData tamagawa(const EllipticCurveFF& E);

struct RBSD {
    int rank = 0;
    mpq_class leading;  // L_0(1/q)
    mpq_class regulator;
    mpq_class tau;
    int64_t torsion = 1;
    mpq_class implied_sha;
};
RBSD rbsd_solve(const LPolynomial& L, const MWLattice& lat, const TamagawaData& tau, int64_t tor);

// |disc NS(X)| from the trivial lattice over F_q and the span of the points
mpq_class ns_regulator(const EllipticCurveFF& E, const mpq_class& regulator_prime, int64_t tor);

}  // namespace ellff
