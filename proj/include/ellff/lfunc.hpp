#pragma once

// L-polynomials of elliptic curves over F_q(t), analytic ranks, Kummer
// pullbacks, the zeta function of the elliptic surface and fiber
// configurations of the regular model.

#include <array>
#include <string>
#include <vector>

#include "ellff/cache.hpp"
#include "ellff/curves.hpp"
#include "ellff/zpoly.hpp"

namespace ellff {

struct LPolynomial {
    ZPoly coeffs;  // constant term 1
    uint64_t q = 0;
    int degree = 0;
    int conductor_degree = 0;
    bool trace_is_zero = true;
    int sign = 1;  // L(T) = sign * (qT)^D * L(1/(q^2 T))
    std::string method;
    std::string str() const { return zstr(coeffs); }
};

struct LOptions {
    int threads = 1;
    CountCache* cache = nullptr;
    // use the functional equation for the upper half of the coefficients
    bool allow_half = true;
    bool force_half = false;
    // compute over the smallest field of definition and base-change
    bool allow_descent = true;
};

// places whose fiber is not read off the integral model, sorted
std::vector<ReductionData> special_places(const EllipticCurveFF& E);

// sums over x in P^1(F_{q^n}): S_n of the fiber traces and the number of
// points on the regular model of the surface (fiber tables at bad places)
struct PointSums {
    mpz_class trace_sum;
    mpz_class surface_points;
};
PointSums point_sums(const EllipticCurveFF& E, int n, const LOptions& opt = {});

LPolynomial l_polynomial(const EllipticCurveFF& E, const LOptions& opt = {});
// independent route: truncated product of local factors over all places
// of degree <= D; only for small q^D
LPolynomial l_polynomial_by_places(const EllipticCurveFF& E);
bool functional_equation_holds(const ZPoly& L, uint64_t q, int D, int sign);
// L over F_{q^k} from L over F_q: inverse roots raised to the k-th power
ZPoly base_change(const ZPoly& L, int k);
// largest |(|beta|/q) - 1| over the inverse roots, via companion-matrix
// eigenvalues of the squarefree parts
double root_modulus_error(const ZPoly& f, uint64_t modulus);

struct AnalyticRank {
    int rank = 0;
    mpq_class leading;  // L_0(1/q) with L = (1 - qT)^r L_0
};
AnalyticRank analytic_rank(const LPolynomial& L);

// t -> u^d over F_q(mu_d)
EllipticCurveFF kummer_pullback(const EllipticCurveFF& E, int d);
int order_mod(uint64_t q, int d);  // o_d(q): order of q in (Z/dZ)^*

struct Parity {
    int value = 0;
    bool odd = false;
};
Parity parity_condition(const EllipticCurveFF& E);

struct TowerRow {
    int d = 0;
    int o_d = 0;
    uint64_t q_d = 0;
    int conductor_degree = 0;
    int degree = 0;
    int rank = 0;
    double seconds = 0;
};
std::vector<TowerRow> tower_scan(const EllipticCurveFF& E, const std::vector<int>& ds, const LOptions& opt = {});

// fiber of the minimal regular model as a configuration of smooth rational
// components.  intersection points carry one branch per component through
// them; frobenius permutes components and branches.
struct FiberConfig {
    int ncomp = 1;
    std::vector<int> multiplicity;
    std::vector<int> frob;  // on components
    struct Branch {
        int node = 0;
        int comp = 0;
    };
    std::vector<Branch> branches;
    std::vector<int> branch_frob;
    int nnodes = 0;
    std::vector<int> node_intersection;  // local intersection number of two branches
    int h1_rank = 0;                     // 1 for I_n
};
FiberConfig fiber_config(const ReductionData& rd);
// number of points over the degree-k extension of k_v, Q = its size
int64_t fiber_points(const ReductionData& rd, uint64_t Q, int k);
// same by enumerating the configuration
int64_t fiber_points_enumerated(const FiberConfig& c, uint64_t Q, int k);
// intersection matrix of all components (identity first)
std::vector<std::vector<int>> intersection_matrix(const FiberConfig& c);
// frobenius orbits on the non-identity components and the intersection
// matrix of the orbit sums
std::vector<std::vector<int>> component_orbits(const FiberConfig& c);
std::vector<std::vector<int>> orbit_gram(const FiberConfig& c);

struct SurfaceZeta {
    std::array<ZPoly, 5> P;
    uint64_t q = 0;
};
SurfaceZeta assemble_surface_zeta(const EllipticCurveFF& E, const LPolynomial& L);
// N_n from Z
std::vector<mpz_class> zeta_counts(const SurfaceZeta& Z, int n_max);

struct SurfaceCheck {
    bool ok = true;
    int first_fail = 0;
    std::vector<mpz_class> from_zeta, direct;
    std::string detail;
};
SurfaceCheck surface_count_consistency(const EllipticCurveFF& E, const SurfaceZeta& Z, int n_max,
                                       const LOptions& opt = {});

// order of vanishing of P2 at T = 1/q and the leading value
AnalyticRank p2_leading(const SurfaceZeta& Z);
// |Br| implied by the Artin-Tate formula
mpq_class artin_tate_leading(const SurfaceZeta& Z, int rho, const mpq_class& R_NS, int64_t ns_tor, int alpha);

// euler characteristic chi of the surface: deg(minimal discriminant)/12
int surface_chi(const EllipticCurveFF& E);

}  // namespace ellff
