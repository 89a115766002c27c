#include <algorithm>
#include <random>

#include "ellff/ffield.hpp"

namespace ellff {

namespace {

FqPoly frobenius_x(const FqPoly& f)
{
    return FqPoly::x(f.field()).powmod(f.field().q(), f);
}

// product of all monic irreducible factors of each degree, f squarefree monic
std::vector<std::pair<FqPoly, int>> distinct_degree(FqPoly f)
{
    std::vector<std::pair<FqPoly, int>> out;
    const FiniteField& F = f.field();
    const uint32_t q = F.q();
    FqPoly x = FqPoly::x(F);
    FqPoly h = x % f;
    int i = 1;
    while (f.degree() >= 2 * i) {
        h = h.powmod(q, f);
        FqPoly g = gcd(f, h - x);
        if (!g.is_one()) {
            out.push_back({g, i});
            f = f / g;
            h = h % f;
        }
        ++i;
    }
    if (f.degree() > 0) out.push_back({f, f.degree()});
    return out;
}

void equal_degree(const FqPoly& g, int d, std::mt19937_64& rng, std::vector<FqPoly>& out)
{
    if (g.degree() == d) {
        out.push_back(g.monic());
        return;
    }
    const FiniteField& F = g.field();
    const uint32_t q = F.q();
    for (;;) {
        std::vector<uint32_t> c(g.degree());
        for (auto& x : c) x = F.from_code(uint32_t(rng() % q));
        FqPoly a(F, c);
        if (a.degree() < 1) continue;
        FqPoly b(F);
        if (F.p() == 2) {
            // absolute trace of a in F_q[t]/g restricted to the degree-d part
            FqPoly s = a % g, cur = a % g;
            for (uint32_t i = 1; i < F.m() * uint32_t(d); ++i) {
                cur = (cur * cur) % g;
                s = s + cur;
            }
            b = s;
        } else {
            // norm-like product a^(1+q+..+q^(d-1)), then ^((q-1)/2)
            FqPoly nm = a % g, cur = a % g;
            for (int i = 1; i < d; ++i) {
                cur = cur.powmod(q, g);
                nm = (nm * cur) % g;
            }
            b = nm.powmod((q - 1) / 2, g) - FqPoly::constant(F, 1);
        }
        FqPoly h = gcd(g, b);
        if (h.degree() > 0 && h.degree() < g.degree()) {
            equal_degree(h, d, rng, out);
            equal_degree(g / h, d, rng, out);
            return;
        }
    }
}

}  // namespace

FqPoly pth_root(const FqPoly& f)
{
    const FiniteField& F = f.field();
    const uint32_t p = F.p();
    std::vector<uint32_t> r;
    for (int i = 0; i <= f.degree(); ++i) {
        uint32_t c = f.raw(i);
        if (i % p) {
            if (c != F.zero()) throw Error("pth_root: not a p-th power");
            continue;
        }
        // a^(1/p) = a^(q/p)
        r.push_back(F.pow(c, F.q() / p));
    }
    return FqPoly(F, std::move(r));
}

bool is_irreducible(const FqPoly& f0)
{
    if (f0.degree() < 1) return false;
    if (f0.degree() == 1) return true;
    FqPoly f = f0.monic();
    const FiniteField& F = f.field();
    const int n = f.degree();
    FqPoly x = FqPoly::x(F);
    std::vector<FqPoly> fr(n + 1);
    fr[0] = x;
    for (int k = 1; k <= n; ++k) fr[k] = fr[k - 1].powmod(F.q(), f);
    if (!(fr[n] - x).is_zero()) return false;
    for (uint64_t r : prime_factors(n)) {
        if (!gcd(f, fr[n / r] - x).is_one()) return false;
    }
    return true;
}

std::vector<std::pair<FqPoly, int>> squarefree_decomposition(const FqPoly& f0)
{
    std::vector<std::pair<FqPoly, int>> out;
    if (f0.degree() < 1) return out;
    FqPoly f = f0.monic();
    const uint32_t p = f.field().p();
    FqPoly fd = f.derivative();
    if (fd.is_zero()) {
        for (auto& [g, e] : squarefree_decomposition(pth_root(f))) out.push_back({g, e * int(p)});
        return out;
    }
    FqPoly c = gcd(f, fd);
    FqPoly w = f / c;
    int i = 1;
    while (!w.is_one()) {
        FqPoly y = gcd(w, c);
        FqPoly fac = w / y;
        if (fac.degree() > 0) out.push_back({fac, i});
        w = y;
        c = c / y;
        ++i;
    }
    if (!c.is_one()) {
        for (auto& [g, e] : squarefree_decomposition(pth_root(c))) out.push_back({g, e * int(p)});
    }
    return out;
}

std::vector<std::pair<FqPoly, int>> factor(const FqPoly& f)
{
    std::vector<std::pair<FqPoly, int>> out;
    std::mt19937_64 rng(0x5eed1234u + uint64_t(f.degree()));
    for (auto& [g, e] : squarefree_decomposition(f)) {
        for (auto& [h, d] : distinct_degree(g)) {
            std::vector<FqPoly> parts;
            equal_degree(h, d, rng, parts);
            for (auto& pp : parts) out.push_back({pp, e});
        }
    }
    // merge equal factors (from different squarefree layers) and sort
    std::sort(out.begin(), out.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<std::pair<FqPoly, int>> merged;
    for (auto& pr : out) {
        if (!merged.empty() && merged.back().first == pr.first)
            merged.back().second += pr.second;
        else
            merged.push_back(pr);
    }
    return merged;
}

std::vector<Fq> roots(const FqPoly& f)
{
    std::vector<Fq> out;
    if (f.degree() < 1) return out;
    const FiniteField& F = f.field();
    FqPoly g = gcd(f, frobenius_x(f.monic()) - FqPoly::x(F));
    if (g.degree() < 1) return out;
    std::vector<FqPoly> lin;
    std::mt19937_64 rng(77);
    equal_degree(g, 1, rng, lin);
    for (auto& l : lin) out.push_back(-l.coeff(0));
    std::sort(out.begin(), out.end(), [](const Fq& a, const Fq& b) { return a.raw() < b.raw(); });
    return out;
}

bool poly_sqrt(const FqPoly& f, FqPoly& out)
{
    const FiniteField& F = f.field();
    if (f.is_zero()) {
        out = f;
        return true;
    }
    if (F.p() == 2) {
        for (int i = 1; i <= f.degree(); i += 2)
            if (f.raw(i) != F.zero()) return false;
        out = pth_root(f);
        return true;
    }
    if (f.degree() % 2) return false;
    int n = f.degree() / 2;
    if (!F.is_square(f.raw(f.degree()))) return false;
    std::vector<uint32_t> g(n + 1, F.zero());
    g[n] = F.sqrt(f.raw(f.degree()));
    uint32_t inv2gn = F.inv(F.mul(F.from_int(2), g[n]));
    for (int k = n - 1; k >= 0; --k) {
        uint32_t s = f.raw(n + k);
        for (int i = k + 1; i <= n; ++i) {
            int j = n + k - i;
            if (j <= k || j > n) continue;
            s = F.sub(s, F.mul(g[i], g[j]));
        }
        g[k] = F.mul(s, inv2gn);
    }
    FqPoly cand(F, g);
    if (cand * cand != f) return false;
    out = cand;
    return true;
}

}  // namespace ellff
