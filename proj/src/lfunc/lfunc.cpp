#include "ellff/lfunc.hpp"

#pragma GCC diagnostic push
#pragma GCC diagnostic ignored "-Wmaybe-uninitialized"
#include <Eigen/Eigenvalues>
#pragma GCC diagnostic pop

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <complex>
#include <set>
#include <thread>

namespace ellff {

namespace {

using RF = RationalFunction;

// frobenius trace at a place over the degree-k extension of k_v
int64_t local_trace(const ReductionData& rd, int k)
{
    return rd.good() ? good_trace(rd, k) : rd.bad_trace(k);
}

template <class F>
void parallel_for(uint64_t n, int threads, F&& body)
{
    threads = std::max(1, threads);
    if (threads == 1 || n < 4096) {
        body(0, n, 0);
        return;
    }
    std::vector<std::thread> pool;
    uint64_t chunk = (n + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
        uint64_t lo = t * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&, lo, hi, t] { body(lo, hi, t); });
    }
    for (auto& th : pool) th.join();
}

// smallest m0 | m with every coefficient in F_{p^m0}
int field_of_definition(const EllipticCurveFF& E)
{
    const FiniteField& F = E.field();
    for (uint32_t m0 = 1; m0 <= F.m(); ++m0) {
        if (F.m() % m0) continue;
        const Embedding& e = embedding(FiniteField::get(F.p(), m0), F);
        bool ok = true;
        for (auto& c : E.model().a)
            for (const FqPoly* f : {&c.num(), &c.den()})
                for (uint32_t r : f->raw_coeffs()) {
                    uint32_t out;
                    if (!e.pull(r, out)) ok = false;
                }
        if (ok) return int(m0);
    }
    return int(F.m());
}

FqPoly pull_poly(const FqPoly& f, const Embedding& e)
{
    std::vector<uint32_t> c;
    for (uint32_t r : f.raw_coeffs()) {
        uint32_t out;
        if (!e.pull(r, out)) throw Error("coefficient not in the subfield");
        c.push_back(out);
    }
    return FqPoly(*e.from, c);
}

EllipticCurveFF descend(const EllipticCurveFF& E, int m0)
{
    const FiniteField& F = E.field();
    const FiniteField& F0 = FiniteField::get(F.p(), uint32_t(m0));
    const Embedding& e = embedding(F0, F);
    std::array<RF, 5> a;
    for (int i = 0; i < 5; ++i) a[i] = RF(pull_poly(E.model().a[i].num(), e), pull_poly(E.model().a[i].den(), e));
    return EllipticCurveFF::from_coeffs(F0, a);
}

// f / g as power series modulo T^(n+1), g(0) = 1
ZPoly series_div(const ZPoly& f, const ZPoly& g, int n)
{
    ZPoly r(n + 1, 0);
    for (int i = 0; i <= n; ++i) {
        mpz_class acc = i < int(f.size()) ? f[i] : mpz_class(0);
        for (int j = 1; j <= i && j < int(g.size()); ++j) acc -= g[j] * r[i - j];
        r[i] = acc;
    }
    trim(r);
    return r;
}

mpz_class zpow_ui(uint64_t q, int e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), q, (unsigned long)e);
    return r;
}

void check_nonisotrivial(const EllipticCurveFF& E)
{
    if (E.j().is_constant())
        throw InputError("the j-invariant is constant; isotrivial curves are not supported");
}

// sign of the functional equation from the coefficients seen so far, 0 if
// not yet determined
int sign_from(const ZPoly& c, int known, uint64_t q, int D)
{
    for (int k = 0; k <= known; ++k) {
        int j = D - k;
        if (j > known || j < k || c[k] == 0) continue;
        // c_j = eps q^(j-k) c_k
        mpz_class rhs = zpow_ui(q, j - k) * c[k];
        if (c[j] == rhs) return 1;
        if (c[j] == -rhs) return -1;
        throw VerificationError("functional equation fails at degree " + std::to_string(j));
    }
    return 0;
}

}  // namespace

// places whose fiber is not read off the integral model: the stored local
// data (bad, non-minimal, infinity) and the poles of the coefficients
std::vector<ReductionData> special_places(const EllipticCurveFF& E)
{
    std::vector<ReductionData> out = E.local_data();
    std::set<FqPoly> seen;
    for (auto& rd : out)
        if (!rd.place.infinite) seen.insert(rd.place.poly);
    for (auto& c : E.model().a)
        for (auto& [g, e] : factor(c.den()))
            if (seen.insert(g).second) out.push_back(classify_reduction(E, Place::finite(g)));
    std::sort(out.begin(), out.end(), [](const ReductionData& a, const ReductionData& b) { return a.place < b.place; });
    return out;
}

PointSums point_sums(const EllipticCurveFF& E, int n, const LOptions& opt)
{
    const FiniteField& F = E.field();
    const FiniteField& Fn = FiniteField::get(F.p(), F.m() * uint32_t(n));
    const Embedding& emb = embedding(F, Fn);
    const uint64_t Q = Fn.q(), q = F.q();
    const auto specials = special_places(E);

    std::vector<uint8_t> mark(Q, 0);
    uint64_t nspecial_x = 0;
    mpz_class trace = 0, surface = 0;
    for (auto& rd : specials) {
        int e = rd.place.degree;
        if (n % e) continue;
        int k = n / e;
        if (!rd.place.infinite) {
            for (auto& r : roots(rd.place.poly.mapped(emb))) {
                mark[r.raw()] = 1;
                ++nspecial_x;
            }
        }
        int64_t A = local_trace(rd, k);
        int64_t N = rd.good() ? int64_t(Q) + 1 - A : fiber_points(rd, Q, k);
        trace += mpz_class(std::to_string(e)) * A;
        surface += mpz_class(std::to_string(e)) * N;
    }

    std::string key = "sum:n=" + std::to_string(n);
    std::optional<int64_t> cached;
    if (opt.cache) cached = opt.cache->get(E.hash(), key);
    uint64_t C = 0;
    if (cached) {
        C = uint64_t(*cached);
    } else {
        const auto& ai = E.integral_coeffs();
        int threads = std::max(1, opt.threads);
        std::vector<uint64_t> part(threads, 0);
        const uint64_t ord = Q - 1;
        parallel_for(Q, threads, [&](uint64_t lo, uint64_t hi, int tid) {
            uint64_t acc = 0;
            for (uint64_t a = lo; a < hi; ++a) {
                if (mark[a]) continue;
                uint64_t len = 1;
                if (a != ord) {
                    // only the least log in each frobenius orbit is counted
                    bool least = true;
                    uint64_t b = a * q % ord;
                    while (b != a) {
                        if (b < a) {
                            least = false;
                            break;
                        }
                        ++len;
                        b = b * q % ord;
                    }
                    if (!least) continue;
                }
                std::array<uint32_t, 5> c;
                for (int i = 0; i < 5; ++i) c[i] = ai[i].eval_raw(Fn, emb, uint32_t(a));
                acc += len * count_cubic(Fn, c);
            }
            part[tid] = acc;
        });
        for (auto v : part) C += v;
        if (opt.cache) opt.cache->put(E.hash(), key, int64_t(C));
    }
    mpz_class Cz(std::to_string(C));
    mpz_class nx(std::to_string(Q - nspecial_x));
    trace += nx * (mpz_class(std::to_string(Q)) + 1) - Cz;
    surface += Cz;
    return {trace, surface};
}

bool functional_equation_holds(const ZPoly& L, uint64_t q, int D, int sign)
{
    if (int(L.size()) != D + 1) return false;
    for (int k = 0; 2 * k <= D; ++k)
        if (L[D - k] != sign * zpow_ui(q, D - 2 * k) * L[k]) return false;
    return true;
}

ZPoly base_change(const ZPoly& L, int k)
{
    int D = degree(L);
    if (k == 1 || D <= 0) return L;
    auto s = power_sums(L, k * D);
    std::vector<mpz_class> t(D + 1, 0);
    for (int j = 1; j <= D; ++j) t[j] = s[k * j];
    return from_power_sums(t, D);
}

LPolynomial l_polynomial(const EllipticCurveFF& E, const LOptions& opt)
{
    check_nonisotrivial(E);
    const FiniteField& F = E.field();
    Conductor cond = conductor(E);
    int D = cond.degree - 4;
    if (D < 0) throw InputError("conductor degree " + std::to_string(cond.degree) + " < 4: curve is isotrivial");

    if (opt.allow_descent && E.annotations().empty()) {
        int m0 = field_of_definition(E);
        if (m0 < int(F.m())) {
            LOptions o = opt;
            o.allow_descent = false;
            LPolynomial L0 = l_polynomial(descend(E, m0), o);
            LPolynomial L;
            L.q = F.q();
            L.degree = D;
            L.conductor_degree = cond.degree;
            if (L0.conductor_degree != cond.degree)
                throw VerificationError("conductor degree changed under constant field extension");
            int k = int(F.m()) / m0;
            L.coeffs = base_change(L0.coeffs, k);
            L.sign = (k % 2 == 0) ? 1 : L0.sign;
            if (!functional_equation_holds(L.coeffs, L.q, D, L.sign)) {
                L.sign = -L.sign;
                if (!functional_equation_holds(L.coeffs, L.q, D, L.sign))
                    throw VerificationError("functional equation fails after base change");
            }
            L.method = L0.method + ", base change from F_" + std::to_string(L0.q);
            return L;
        }
    }

    LPolynomial L;
    const uint64_t q = F.q();
    L.q = q;
    L.degree = D;
    L.conductor_degree = cond.degree;
    if (D == 0) {
        L.coeffs = {1};
        L.method = "degree 0";
        return L;
    }
    // counting over F_{q^n} costs about q^(2n)/n
    double full_cost = 0;
    for (int n = 1; n <= D; ++n) full_cost += std::pow(double(q), 2.0 * n) / n;
    bool half = opt.force_half || (opt.allow_half && full_cost > 1e8);

    std::vector<mpz_class> s(1, 0);
    ZPoly c{1};
    auto extend = [&]() {
        int n = int(s.size());
        s.push_back(-point_sums(E, n, opt).trace_sum);
        c = from_power_sums(s, n);
        c.resize(n + 1, 0);
    };
    if (!half) {
        while (int(s.size()) <= D) extend();
        L.coeffs = c;
        trim(L.coeffs);
        if (int(L.coeffs.size()) != D + 1) throw VerificationError("L-polynomial has degree below D");
        mpz_class top = L.coeffs[D], qD = zpow_ui(q, D);
        L.sign = top == qD ? 1 : (top == -qD ? -1 : 0);
        if (L.sign == 0 || !functional_equation_holds(L.coeffs, q, D, L.sign))
            throw VerificationError("functional equation fails for the computed L-polynomial");
        L.method = "point sums over F_" + std::to_string(q) + "^n, n <= " + std::to_string(D);
        return L;
    }
    int h = D / 2;
    while (int(s.size()) <= h) extend();
    int sign = 0;
    while (true) {
        int known = int(s.size()) - 1;
        sign = sign_from(c, known, q, D);
        if (sign) break;
        if (D % 2 == 0 && known >= h && c[h] != 0) {
            sign = 1;
            break;
        }
        extend();
    }
    int known = int(s.size()) - 1;
    ZPoly full(D + 1, 0);
    for (int k = 0; k <= known && k <= D; ++k) full[k] = c[k];
    for (int k = 0; 2 * k <= D; ++k) {
        mpz_class v = sign * zpow_ui(q, D - 2 * k) * full[k];
        if (D - k <= known && full[D - k] != v) throw VerificationError("functional equation fails");
        full[D - k] = v;
    }
    L.coeffs = full;
    L.sign = sign;
    L.method = "point sums over F_" + std::to_string(q) + "^n, n <= " + std::to_string(known) +
               ", functional equation for the rest";
    return L;
}

LPolynomial l_polynomial_by_places(const EllipticCurveFF& E)
{
    check_nonisotrivial(E);
    const FiniteField& F = E.field();
    Conductor cond = conductor(E);
    int D = cond.degree - 4;
    if (D < 0) throw InputError("conductor degree below 4");
    const uint64_t q = F.q();
    auto specials = special_places(E);
    const auto& ai = E.integral_coeffs();
    ZPoly prod{1};
    for (auto& v : enumerate_places(F, std::max(D, 1))) {
        if (v.degree > D) continue;
        int e = v.degree;
        uint64_t qv = ipow(q, unsigned(e));
        const ReductionData* rd = nullptr;
        for (auto& r : specials)
            if (r.place == v) rd = &r;
        ZPoly f(2 * e + 1, 0);
        f[0] = 1;
        if (rd && !rd->good()) {
            f[e] = -rd->bad_trace(1);
        } else {
            int64_t a;
            if (rd) {
                a = good_trace(*rd, 1);
            } else {
                const FiniteField& R = residue_field(v);
                std::array<uint32_t, 5> c;
                for (int i = 0; i < 5; ++i) c[i] = reduce_at(RF(ai[i]), v).raw();
                a = int64_t(R.q()) + 1 - int64_t(count_cubic(R, c));
            }
            f[e] = -a;
            f[2 * e] = mpz_class(std::to_string(qv));
        }
        trim(f);
        prod = series_div(prod, f, D);
    }
    prod.resize(D + 1, 0);
    LPolynomial L;
    L.q = q;
    L.degree = D;
    L.conductor_degree = cond.degree;
    L.coeffs = prod;
    mpz_class qD = zpow_ui(q, D);
    L.sign = prod[D] == qD ? 1 : (prod[D] == -qD ? -1 : 0);
    if (L.sign == 0 || !functional_equation_holds(L.coeffs, q, D, L.sign))
        throw VerificationError("functional equation fails for the place product");
    L.method = "product over places of degree <= " + std::to_string(D);
    return L;
}

double root_modulus_error(const ZPoly& f0, uint64_t modulus)
{
    // g(T) = f(T/modulus) has inverse roots of absolute value 1, and so do
    // the roots of each squarefree factor
    QPoly g;
    mpq_class scale = 1;
    for (auto& c : f0) {
        g.push_back(mpq_class(c) * scale);
        scale /= mpq_class(std::to_string(modulus));
    }
    double err = 0;
    for (auto& [h, mult] : q_squarefree(g)) {
        int n = int(h.size()) - 1;
        if (n < 1) continue;
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
        for (int i = 1; i < n; ++i) C(i, i - 1) = 1;
        for (int i = 0; i < n; ++i) C(i, n - 1) = -mpq_class(h[i] / h[n]).get_d();
        Eigen::EigenSolver<Eigen::MatrixXd> es(C, false);
        for (int i = 0; i < n; ++i) err = std::max(err, std::abs(std::abs(es.eigenvalues()[i]) - 1.0));
    }
    return err;
}

AnalyticRank analytic_rank(const LPolynomial& L)
{
    AnalyticRank r;
    ZPoly f = L.coeffs;
    ZPoly lin = one_minus(mpz_class(std::to_string(L.q)), 1);
    while (degree(f) > 0 && zdivides(lin, f)) {
        f = zdiv(f, lin);
        ++r.rank;
    }
    r.leading = zeval(f, mpq_class(1, mpz_class(std::to_string(L.q))));
    r.leading.canonicalize();
    return r;
}

int order_mod(uint64_t q, int d)
{
    if (d < 1) throw InputError("d must be positive");
    if (d == 1) return 1;
    return int(multiplicative_order(q % uint64_t(d), uint64_t(d)));
}

EllipticCurveFF kummer_pullback(const EllipticCurveFF& E, int d)
{
    const FiniteField& F = E.field();
    if (d < 1) throw InputError("d must be positive");
    if (d % int(F.p()) == 0) throw InputError("d must be prime to the characteristic");
    if (d == 1) return E;
    if (!E.annotations().empty()) throw InputError("annotated curves cannot be pulled back");
    int o = order_mod(F.q(), d);
    uint64_t big = ipow(F.p(), F.m() * unsigned(o));
    if (big > FiniteField::size_limit())
        throw InputError("F_q(mu_" + std::to_string(d) + ") has " + std::to_string(big) + " elements, over the limit");
    const FiniteField& G = FiniteField::get(F.p(), F.m() * uint32_t(o));
    EllipticCurveFF P(E.model().mapped(embedding(F, G)).inflate(d));
    P.set_kummer({std::make_shared<const EllipticCurveFF>(E), d});
    return P;
}

Parity parity_condition(const EllipticCurveFF& E)
{
    Parity r;
    r.value = conductor(E).degree_prime;
    for (auto& rd : E.local_data()) {
        bool zero = !rd.place.infinite && rd.place.poly == FqPoly::x(E.field());
        if (zero || rd.place.infinite) r.value += rd.swan;
    }
    r.odd = r.value % 2 != 0;
    return r;
}

std::vector<TowerRow> tower_scan(const EllipticCurveFF& E, const std::vector<int>& ds, const LOptions& opt)
{
    std::vector<TowerRow> rows;
    for (int d : ds) {
        auto t0 = std::chrono::steady_clock::now();
        TowerRow row;
        row.d = d;
        row.o_d = order_mod(E.field().q(), d);
        EllipticCurveFF Ed = kummer_pullback(E, d);
        row.q_d = Ed.field().q();
        LPolynomial L = l_polynomial(Ed, opt);
        row.conductor_degree = L.conductor_degree;
        row.degree = L.degree;
        row.rank = analytic_rank(L).rank;
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(row);
    }
    return rows;
}

int surface_chi(const EllipticCurveFF& E)
{
    int s = 0;
    for (auto& rd : E.local_data()) s += rd.place.degree * rd.disc_valuation;
    if (s % 12) throw VerificationError("degree of the minimal discriminant is not divisible by 12");
    return s / 12;
}

SurfaceZeta assemble_surface_zeta(const EllipticCurveFF& E, const LPolynomial& L)
{
    SurfaceZeta Z;
    const uint64_t q = E.field().q();
    Z.q = q;
    mpz_class qz(std::to_string(q));
    Z.P[0] = {1, -1};
    Z.P[1] = {1};
    Z.P[3] = {1};
    Z.P[4] = {1, -qz * qz};
    ZPoly P2 = zpow(one_minus(qz, 1), 2);
    for (auto& rd : E.local_data()) {
        if (rd.good()) continue;
        for (int o : rd.orbits) {
            int k = o * rd.place.degree;
            P2 = zmul(P2, one_minus(zpow_ui(q, k), k));
        }
    }
    Z.P[2] = zmul(P2, L.coeffs);
    return Z;
}

std::vector<mpz_class> zeta_counts(const SurfaceZeta& Z, int n_max)
{
    std::vector<mpz_class> N(n_max + 1, 0);
    for (int i = 0; i < 5; ++i) {
        auto s = power_sums(Z.P[i], n_max);
        for (int n = 1; n <= n_max; ++n) N[n] += (i % 2 ? -1 : 1) * s[n];
    }
    return N;
}

SurfaceCheck surface_count_consistency(const EllipticCurveFF& E, const SurfaceZeta& Z, int n_max,
                                       const LOptions& opt)
{
    SurfaceCheck r;
    r.from_zeta = zeta_counts(Z, n_max);
    r.direct.assign(n_max + 1, 0);
    for (int n = 1; n <= n_max; ++n) {
        r.direct[n] = point_sums(E, n, opt).surface_points;
        if (r.ok && r.direct[n] != r.from_zeta[n]) {
            r.ok = false;
            r.first_fail = n;
            std::string d = "n=" + std::to_string(n) + ": zeta gives " + r.from_zeta[n].get_str() +
                            ", direct count " + r.direct[n].get_str() + "; fibers:";
            for (auto& rd : E.local_data()) {
                if (rd.good() || n % rd.place.degree) continue;
                uint64_t Q = ipow(E.field().q(), unsigned(n));
                d += " " + rd.place.str() + " " + rd.type.str() + " -> " +
                     std::to_string(fiber_points(rd, Q, n / rd.place.degree));
            }
            r.detail = d;
        }
    }
    return r;
}

AnalyticRank p2_leading(const SurfaceZeta& Z)
{
    LPolynomial L;
    L.coeffs = Z.P[2];
    L.q = Z.q;
    return analytic_rank(L);
}

mpq_class artin_tate_leading(const SurfaceZeta& Z, int rho, const mpq_class& R_NS, int64_t ns_tor, int alpha)
{
    AnalyticRank a = p2_leading(Z);
    if (a.rank != rho)
        throw VerificationError("order of P2 at T=1/q is " + std::to_string(a.rank) + " but rho = " +
                                std::to_string(rho));
    if (R_NS == 0) throw Error("artin_tate_leading: zero discriminant");
    mpq_class qa = 1;
    for (int i = 0; i < std::abs(alpha); ++i) qa *= mpq_class(std::to_string(Z.q));
    if (alpha < 0) qa = 1 / qa;
    mpq_class br = a.leading * mpq_class(ns_tor * ns_tor) * qa / R_NS;
    br.canonicalize();
    return br;
}

}  // namespace ellff
