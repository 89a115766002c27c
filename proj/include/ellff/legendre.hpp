#pragma once

// the explicit constructions in the Kummer tower: the Legendre curve
// y^2 = x(x+1)(x+t) with the points P(u) = (u, u(u+1)^{d/2}), and the
// curve y^2 + xy + ty = x^3 + tx^2 with its Frobenius-graph points.
// both live over F_p(mu_d)(u), t = u^d, d = p^f + 1.

#include <string>
#include <vector>

#include "ellff/mwlattice.hpp"

namespace ellff {

struct LegendreInstance {
    int p = 0, f = 0, d = 0;
    const FiniteField* field = nullptr;  // F_p(mu_d)
    Fq zeta;                             // primitive d-th root of unity
    std::vector<EllipticCurveFF> curve;  // one entry; kept in a vector since the type has no default
    std::vector<CurvePoint> points;      // P(zeta^i u), i = 0..d-1
    const EllipticCurveFF& E() const { return curve.front(); }
};

// throws InputError for p = 2 or a constant field beyond the size limit
LegendreInstance build_legendre(int p, int f);
// same construction for the second curve; n plays the role of f
LegendreInstance build_dpct(int p, int n);

struct TheoremReport {
    bool ok = true;
    std::vector<std::string> failures;
    MWLattice lattice;
    bool kernel_matches = false;     // rational span of (1,..,1), (1,-1,..,-1)
    bool relations_torsion = false;  // both relations have height zero
    bool circulant = false;
    bool on_curve = false;
    int expected_rank = 0;
    int64_t torsion_order = 0;
    std::vector<int64_t> torsion_structure;
    LPolynomial L;
    int analytic_rank = -1;
    mpq_class leading;
};

struct TheoremOptions {
    LOptions lopt;
    bool check_torsion = true;
    bool check_lfunction = true;
};

TheoremReport verify_legendre_theorem(const LegendreInstance& inst, const TheoremOptions& opt = {});
TheoremReport verify_dpct(const LegendreInstance& inst, const TheoremOptions& opt = {});

struct ClassNumberCheck {
    mpq_class lhs;          // L_0(1/q) * |tor|^2
    mpq_class rhs;          // R'(V_d) * tau
    mpq_class implied;      // lhs / rhs = |Sha| / [E : V_d]^2
    bool holds = false;     // implied is p^k for some k, k >= 0
    int p_exponent = 0;
    mpq_class tau;
};
ClassNumberCheck class_number_check(const LegendreInstance& inst, const TheoremReport& rep);

// the closed-form point of the second construction at u
CurvePoint dpct_point(const FiniteField& F, int q, const RationalFunction& u);

}  // namespace ellff
