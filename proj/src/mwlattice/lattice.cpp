#include <numeric>

#include "ellff/mwlattice.hpp"

namespace ellff {

namespace {

using ZMatrix = std::vector<std::vector<mpz_class>>;

// row echelon form over Q; returns the rank, M is overwritten
int eliminate(QMatrix& M, mpq_class* det = nullptr)
{
    int rows = int(M.size());
    int cols = rows ? int(M[0].size()) : 0;
    int r = 0;
    mpq_class d = 1;
    for (int c = 0; c < cols && r < rows; ++c) {
        int piv = -1;
        for (int i = r; i < rows; ++i)
            if (M[i][c] != 0) {
                piv = i;
                break;
            }
        if (piv < 0) {
            d = 0;
            continue;
        }
        if (piv != r) {
            std::swap(M[piv], M[r]);
            d = -d;
        }
        d *= M[r][c];
        for (int i = r + 1; i < rows; ++i) {
            if (M[i][c] == 0) continue;
            mpq_class f = M[i][c] / M[r][c];
            for (int j = c; j < cols; ++j) M[i][j] -= f * M[r][j];
        }
        ++r;
    }
    if (r < rows) d = 0;
    if (det) *det = d;
    return r;
}

// column operations bringing A to [H | 0]; U tracks them and stays
// unimodular.  returns the rank
int column_echelon(ZMatrix A, ZMatrix& U)
{
    int rows = int(A.size());
    int n = rows ? int(A[0].size()) : 0;
    U.assign(n, std::vector<mpz_class>(n, 0));
    for (int i = 0; i < n; ++i) U[i][i] = 1;
    auto colop = [&](int a, int b, const mpz_class& x, const mpz_class& y, const mpz_class& z, const mpz_class& w) {
        // (col a, col b) <- (x a + y b, z a + w b)
        auto apply = [&](ZMatrix& M) {
            for (auto& row : M) {
                mpz_class ca = row[a], cb = row[b];
                row[a] = x * ca + y * cb;
                row[b] = z * ca + w * cb;
            }
        };
        apply(A);
        apply(U);
    };
    int piv = 0;
    for (int i = 0; i < rows && piv < n; ++i) {
        for (int k = piv + 1; k < n; ++k) {
            if (A[i][k] == 0) continue;
            mpz_class a = A[i][piv], b = A[i][k], g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
            // [s -b/g; t a/g] has determinant 1
            colop(piv, k, s, t, mpz_class(-b / g), mpz_class(a / g));
        }
        if (A[i][piv] != 0) ++piv;
    }
    return piv;
}

}  // namespace

int rank_of(const QMatrix& M)
{
    QMatrix A = M;
    return eliminate(A);
}

mpq_class det_of(const QMatrix& M)
{
    if (M.empty()) return 1;
    if (M.size() != M[0].size()) throw Error("det_of: matrix is not square");
    QMatrix A = M;
    mpq_class d;
    eliminate(A, &d);
    d.canonicalize();
    return d;
}

bool same_span(const std::vector<ZVector>& a, const std::vector<ZVector>& b)
{
    auto as_q = [](const std::vector<ZVector>& v) {
        QMatrix M;
        for (auto& row : v) {
            std::vector<mpq_class> r;
            for (auto& x : row) r.push_back(mpq_class(x));
            M.push_back(r);
        }
        return M;
    };
    QMatrix A = as_q(a), B = as_q(b), AB = A;
    AB.insert(AB.end(), B.begin(), B.end());
    int ra = rank_of(A);
    return ra == rank_of(B) && ra == rank_of(AB);
}

MWLattice build_lattice(const EllipticCurveFF& E, const std::vector<CurvePoint>& points)
{
    MWLattice L;
    L.points = points;
    size_t n = points.size();
    std::vector<mpq_class> h(n);
    for (size_t i = 0; i < n; ++i) h[i] = canonical_height(E, points[i]);
    L.gram.assign(n, std::vector<mpq_class>(n));
    for (size_t i = 0; i < n; ++i) {
        L.gram[i][i] = h[i];
        for (size_t j = i + 1; j < n; ++j) {
            mpq_class v = (canonical_height(E, E.add(points[i], points[j])) - h[i] - h[j]) / 2;
            v.canonicalize();
            L.gram[i][j] = L.gram[j][i] = v;
        }
    }
    // integer relations: clear denominators and eliminate columns
    mpz_class den = 1;
    for (auto& row : L.gram)
        for (auto& x : row) mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), x.get_den().get_mpz_t());
    ZMatrix A(n, std::vector<mpz_class>(n));
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) A[i][j] = mpz_class(L.gram[i][j] * den);
    ZMatrix U;
    L.rank = column_echelon(A, U);
    for (size_t c = 0; c < n; ++c) {
        ZVector v(n);
        for (size_t i = 0; i < n; ++i) v[i] = U[i][c];
        (int(c) < L.rank ? L.basis : L.kernel).push_back(v);
    }
    // hermite form of the kernel for display
    {
        auto& K = L.kernel;
        size_t lead = 0;
        for (size_t r = 0; r < K.size() && lead < n; ++lead) {
            for (size_t i = r + 1; i < K.size(); ++i) {
                while (K[i][lead] != 0) {
                    mpz_class f;
                    mpz_fdiv_q(f.get_mpz_t(), K[r][lead].get_mpz_t(), K[i][lead].get_mpz_t());
                    for (size_t j = 0; j < n; ++j) K[r][j] -= f * K[i][j];
                    std::swap(K[r], K[i]);
                }
            }
            if (K[r][lead] == 0) continue;
            if (K[r][lead] < 0)
                for (auto& x : K[r]) x = -x;
            for (size_t i = 0; i < r; ++i) {
                mpz_class f;
                mpz_fdiv_q(f.get_mpz_t(), K[i][lead].get_mpz_t(), K[r][lead].get_mpz_t());
                for (size_t j = 0; j < n; ++j) K[i][j] -= f * K[r][j];
            }
            ++r;
        }
    }
    L.reduced_gram.assign(L.rank, std::vector<mpq_class>(L.rank));
    for (int a = 0; a < L.rank; ++a)
        for (int b = 0; b < L.rank; ++b) {
            mpq_class s = 0;
            for (size_t i = 0; i < n; ++i)
                for (size_t j = 0; j < n; ++j) s += L.basis[a][i] * L.gram[i][j] * L.basis[b][j];
            s.canonicalize();
            L.reduced_gram[a][b] = s;
        }
    L.regulator_prime = det_of(L.reduced_gram);
    for (int k = 1; k <= L.rank; ++k) {
        QMatrix minor(k, std::vector<mpq_class>(k));
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) minor[a][b] = L.reduced_gram[a][b];
        if (det_of(minor) <= 0) throw VerificationError("height pairing is not positive definite on the span");
    }
    return L;
}

ShiodaTate shioda_tate_check(const EllipticCurveFF& E, int mw_rank, const SurfaceZeta* Z)
{
    ShiodaTate s;
    s.mw_rank = mw_rank;
    for (auto& rd : E.local_data()) {
        if (rd.good()) continue;
        s.breakdown.push_back({rd.place, rd.f_v - 1});
        s.trivial_rank += rd.f_v - 1;
    }
    s.ns_rank = s.mw_rank + s.trivial_rank;
    if (Z) {
        s.zeta_order = p2_leading(*Z).rank;
        s.consistent = s.zeta_order == s.ns_rank;
    }
    return s;
}

TamagawaData tamagawa(const EllipticCurveFF& E)
{
    TamagawaData T;
    mpz_class prod = 1;
    for (auto& rd : E.local_data()) {
        if (rd.a_v == 0 && rd.c_v == 1) continue;
        T.places.push_back({rd.place, rd.a_v, rd.c_v});
        T.exponent += rd.place.degree * rd.a_v;
        prod *= rd.c_v;
    }
    mpz_class qe;
    mpz_ui_pow_ui(qe.get_mpz_t(), E.field().q(), std::abs(T.exponent));
    T.tau = T.exponent >= 0 ? mpq_class(qe * prod) : mpq_class(prod, qe);
    T.tau.canonicalize();
    return T;
}

RBSD rbsd_solve(const LPolynomial& L, const MWLattice& lat, const TamagawaData& tau, int64_t tor)
{
    RBSD r;
    auto ar = analytic_rank(L);
    if (ar.rank != lat.rank)
        throw VerificationError("analytic rank " + std::to_string(ar.rank) + " differs from the lattice rank " +
                                std::to_string(lat.rank));
    r.rank = ar.rank;
    r.leading = ar.leading;
    r.regulator = lat.regulator_prime;
    r.tau = tau.tau;
    r.torsion = tor;
    if (r.regulator == 0 || r.tau == 0) throw VerificationError("degenerate regulator or tamagawa product");
    r.implied_sha = r.leading * mpq_class(tor) * mpq_class(tor) / (r.regulator * r.tau);
    r.implied_sha.canonicalize();
    return r;
}

mpq_class ns_regulator(const EllipticCurveFF& E, const mpq_class& regulator_prime, int64_t tor)
{
    mpq_class r = regulator_prime;
    for (auto& rd : E.local_data()) {
        if (rd.good() || rd.f_v == 1) continue;
        auto G = orbit_gram(fiber_config(rd));
        QMatrix M(G.size(), std::vector<mpq_class>(G.size()));
        for (size_t i = 0; i < G.size(); ++i)
            for (size_t j = 0; j < G.size(); ++j) M[i][j] = mpq_class(int64_t(G[i][j]) * rd.place.degree);
        r *= abs(det_of(M));
    }
    r /= mpq_class(tor) * mpq_class(tor);
    r.canonicalize();
    return r;
}

}  // namespace ellff
