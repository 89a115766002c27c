#include "ellff/legendre.hpp"

namespace ellff {

namespace {

using RF = RationalFunction;

LegendreInstance pulled_back(int p, int f, const char* base_curve)
{
    if (p == 2 || !is_prime(uint64_t(p))) throw InputError("need an odd prime p, got " + std::to_string(p));
    if (f < 1) throw InputError("need f >= 1");
    uint64_t q = ipow(uint64_t(p), unsigned(f));
    LegendreInstance inst;
    inst.p = p;
    inst.f = f;
    inst.d = int(q + 1);
    // p^f = -1 mod d, so the constant field F_p(mu_d) has degree 2f
    if (ipow(uint64_t(p), unsigned(2 * f)) > FiniteField::size_limit())
        throw InputError("constant field F_" + std::to_string(p) + "^" + std::to_string(2 * f) + " is too large");
    const FiniteField& Fp = FiniteField::get(uint32_t(p), 1);
    inst.curve.push_back(kummer_pullback(parse_curve(base_curve, Fp), inst.d));
    inst.field = &inst.E().field();
    inst.zeta = Fq(*inst.field, inst.field->zeta(uint32_t(inst.d)));
    if (inst.field->order_of(inst.zeta.raw()) != uint32_t(inst.d)) throw Error("root of unity has the wrong order");
    return inst;
}

void require_on_curve(const LegendreInstance& inst)
{
    for (size_t i = 0; i < inst.points.size(); ++i)
        if (!inst.E().on_curve(inst.points[i]))
            throw VerificationError("P_" + std::to_string(i) + " does not satisfy the Weierstrass equation");
}

std::vector<ZVector> expected_relations(int d)
{
    ZVector ones(d, 1), alt(d);
    for (int i = 0; i < d; ++i) alt[i] = (i % 2) ? -1 : 1;
    return {ones, alt};
}

TheoremReport verify_common(const LegendreInstance& inst, const TheoremOptions& opt, bool expect_torsion8)
{
    TheoremReport rep;
    const EllipticCurveFF& E = inst.E();
    auto fail = [&](const std::string& s) {
        rep.ok = false;
        rep.failures.push_back(s);
    };
    rep.on_curve = true;
    for (size_t i = 0; i < inst.points.size(); ++i)
        if (!E.on_curve(inst.points[i])) {
            rep.on_curve = false;
            fail("P_" + std::to_string(i) + " is not on the curve");
        }
    if (!rep.on_curve) return rep;

    rep.expected_rank = inst.d - 2;
    rep.lattice = build_lattice(E, inst.points);
    if (rep.lattice.rank != rep.expected_rank)
        fail("gram rank " + std::to_string(rep.lattice.rank) + ", expected " + std::to_string(rep.expected_rank));
    auto rel = expected_relations(inst.d);
    rep.kernel_matches = same_span(rep.lattice.kernel, rel);
    if (!rep.kernel_matches) fail("kernel differs from span{(1,..,1), (1,-1,..,-1)}");

    rep.relations_torsion = true;
    for (auto& r : rel) {
        CurvePoint S;
        for (int i = 0; i < inst.d; ++i) S = E.add(S, E.mul(inst.points[i], r[i].get_si()));
        if (canonical_height(E, S) != 0) rep.relations_torsion = false;
    }
    if (!rep.relations_torsion) fail("a relation has nonzero height");

    rep.circulant = true;
    int d = inst.d;
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j)
            if (rep.lattice.gram[i][j] != rep.lattice.gram[(i + 1) % d][(j + 1) % d]) rep.circulant = false;
    if (!rep.circulant) fail("gram matrix is not circulant");

    if (opt.check_torsion) {
        auto tor = torsion(E);
        rep.torsion_order = tor.order;
        rep.torsion_structure = tor.structure;
        if (expect_torsion8 && tor.order != 8) fail("torsion order " + std::to_string(tor.order) + ", expected 8");
    }
    if (opt.check_lfunction) {
        rep.L = l_polynomial(E, opt.lopt);
        auto ar = analytic_rank(rep.L);
        rep.analytic_rank = ar.rank;
        rep.leading = ar.leading;
        if (!functional_equation_holds(rep.L.coeffs, rep.L.q, rep.L.degree, rep.L.sign))
            fail("functional equation fails");
        if (ar.rank != rep.expected_rank)
            fail("analytic rank " + std::to_string(ar.rank) + ", expected " + std::to_string(rep.expected_rank));
    }
    return rep;
}

}  // namespace

LegendreInstance build_legendre(int p, int f)
{
    LegendreInstance inst = pulled_back(p, f, "a2=t+1, a4=t");
    const FiniteField& F = *inst.field;
    // (u+1)^(d-1) = 1 + u^(d-1) since d-1 = p^f; this is what makes P(u) a point
    FqPoly u = FqPoly::x(F), one = FqPoly::constant(F, 1);
    if ((u + one).pow(inst.d - 1) != one + u.pow(inst.d - 1)) throw VerificationError("frobenius identity fails");
    for (int i = 0; i < inst.d; ++i) {
        RF x = RF::t(F).scaled(inst.zeta.pow(i));
        RF y = x * (x + RF::constant(F, 1)).pow(inst.d / 2);
        inst.points.push_back(CurvePoint::affine(x, y));
    }
    require_on_curve(inst);
    return inst;
}

CurvePoint dpct_point(const FiniteField& F, int q, const RationalFunction& u)
{
    RF one = RF::constant(F, 1), two = RF::constant(F, 2);
    RF w = one + RF::constant(F, 4) * u;
    RF uq = u.pow(q), u2q = u.pow(2 * q);
    RF x = uq * (uq - u) / w.pow(q);
    RF y = u2q * (one + two * u + two * uq) / (two * w.pow((3 * q - 1) / 2)) - u2q / (two * w.pow(q - 1));
    return CurvePoint::affine(x, y);
}

LegendreInstance build_dpct(int p, int n)
{
    LegendreInstance inst = pulled_back(p, n, "a1=1, a2=t, a3=t");
    const FiniteField& F = *inst.field;
    int q = inst.d - 1;
    if ((3 * q - 1) % 2 != 0) throw Error("exponent (3q-1)/2 is not an integer");
    for (int i = 0; i < inst.d; ++i) inst.points.push_back(dpct_point(F, q, RF::t(F).scaled(inst.zeta.pow(i))));
    require_on_curve(inst);
    return inst;
}

TheoremReport verify_legendre_theorem(const LegendreInstance& inst, const TheoremOptions& opt)
{
    return verify_common(inst, opt, true);
}

TheoremReport verify_dpct(const LegendreInstance& inst, const TheoremOptions& opt)
{
    return verify_common(inst, opt, false);
}

ClassNumberCheck class_number_check(const LegendreInstance& inst, const TheoremReport& rep)
{
    if (rep.analytic_rank < 0 || rep.torsion_order == 0)
        throw InputError("class number check needs the L-function and torsion");
    ClassNumberCheck c;
    auto T = tamagawa(inst.E());
    c.tau = T.tau;
    mpq_class tor(rep.torsion_order);
    c.lhs = rep.leading * tor * tor;
    c.rhs = rep.lattice.regulator_prime * T.tau;
    if (c.rhs == 0) throw VerificationError("zero regulator");
    c.implied = c.lhs / c.rhs;
    c.implied.canonicalize();
    mpz_class num = c.implied.get_num(), den = c.implied.get_den();
    mpz_class P = inst.p;
    int k = 0;
    while (num % P == 0 && num > 1) {
        num /= P;
        ++k;
    }
    while (den % P == 0 && den > 1) {
        den /= P;
        --k;
    }
    c.p_exponent = k;
    c.holds = num == 1 && den == 1 && k >= 0;
    return c;
}

}  // namespace ellff
