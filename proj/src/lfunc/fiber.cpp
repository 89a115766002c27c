#include <algorithm>
#include <numeric>

#include "ellff/lfunc.hpp"

namespace ellff {

namespace {

struct Builder {
    FiberConfig c;
    explicit Builder(std::vector<int> mult)
    {
        c.ncomp = int(mult.size());
        c.multiplicity = std::move(mult);
        c.frob.resize(c.ncomp);
        std::iota(c.frob.begin(), c.frob.end(), 0);
    }
    // transversal point on the given components; returns the node index
    int node(std::vector<int> comps, int inter = 1)
    {
        int id = c.nnodes++;
        c.node_intersection.push_back(inter);
        for (int k : comps) {
            c.branches.push_back({id, k});
            c.branch_frob.push_back(int(c.branch_frob.size()));
        }
        return id;
    }
    void chain(const std::vector<int>& comps)
    {
        for (size_t i = 0; i + 1 < comps.size(); ++i) node({comps[i], comps[i + 1]});
    }
    // permute components and carry the branches along
    void swap(const std::vector<std::pair<int, int>>& pairs)
    {
        for (auto [a, b] : pairs) {
            c.frob[a] = b;
            c.frob[b] = a;
        }
        fix_branches();
    }
    void cycle(const std::vector<int>& comps)
    {
        for (size_t i = 0; i < comps.size(); ++i) c.frob[comps[i]] = comps[(i + 1) % comps.size()];
        fix_branches();
    }
    // for tree-like configurations a branch is determined by its component
    // and the image node, which is the node whose component set is the image
    void fix_branches()
    {
        auto comps_of = [&](int nd) {
            std::vector<int> s;
            for (auto& b : c.branches)
                if (b.node == nd) s.push_back(b.comp);
            std::sort(s.begin(), s.end());
            return s;
        };
        for (size_t i = 0; i < c.branches.size(); ++i) {
            auto img = comps_of(c.branches[i].node);
            for (auto& k : img) k = c.frob[k];
            std::sort(img.begin(), img.end());
            int target = -1;
            for (int nd = 0; nd < c.nnodes; ++nd)
                if (comps_of(nd) == img) target = nd;
            if (target < 0) throw Error("fiber configuration: frobenius does not preserve the nodes");
            int comp = c.frob[c.branches[i].comp];
            for (size_t j = 0; j < c.branches.size(); ++j)
                if (c.branches[j].node == target && c.branches[j].comp == comp) c.branch_frob[i] = int(j);
        }
    }
};

bool split_from_orbits(const ReductionData& rd)
{
    return std::all_of(rd.orbits.begin(), rd.orbits.end(), [](int o) { return o == 1; });
}

}  // namespace

FiberConfig fiber_config(const ReductionData& rd)
{
    const KodairaType& k = rd.type;
    switch (k.kind) {
    case KodairaType::I0: throw Error("fiber_config: good fiber at " + rd.place.str());
    case KodairaType::In: {
        // n-gon; node j joins components j and j+1, branch 2j+s lies on j+s
        int n = k.n;
        FiberConfig c;
        c.ncomp = n;
        c.multiplicity.assign(n, 1);
        c.frob.resize(n);
        c.nnodes = n;
        c.node_intersection.assign(n, 1);
        c.h1_rank = 1;
        bool split = rd.split == 1;
        for (int j = 0; j < n; ++j) {
            c.branches.push_back({j, j});
            c.branches.push_back({j, (j + 1) % n});
        }
        c.branch_frob.resize(2 * n);
        for (int j = 0; j < n; ++j) {
            c.frob[j] = split ? j : (n - j) % n;
            int img = ((-j - 1) % n + n) % n;
            c.branch_frob[2 * j] = split ? 2 * j : 2 * img + 1;
            c.branch_frob[2 * j + 1] = split ? 2 * j + 1 : 2 * img;
        }
        return c;
    }
    case KodairaType::II: return Builder({1}).c;
    case KodairaType::III: {
        Builder b({1, 1});
        b.node({0, 1}, 2);
        return b.c;
    }
    case KodairaType::IV: {
        Builder b({1, 1, 1});
        b.node({0, 1, 2});
        if (!split_from_orbits(rd)) b.swap({{1, 2}});
        return b.c;
    }
    case KodairaType::I0s: {
        // centre 1, leaves 0, 2, 3, 4
        Builder b({1, 2, 1, 1, 1});
        for (int l : {0, 2, 3, 4}) b.node({l, 1});
        if (rd.c_v == 2) b.swap({{3, 4}});
        else if (rd.c_v == 1) b.cycle({2, 3, 4});
        return b.c;
    }
    case KodairaType::Ins: {
        // 0, 1 near leaves, chain 2..n+2, far leaves n+3, n+4
        int n = k.n;
        std::vector<int> mult{1, 1};
        for (int i = 0; i <= n; ++i) mult.push_back(2);
        mult.push_back(1);
        mult.push_back(1);
        Builder b(mult);
        b.node({0, 2});
        b.node({1, 2});
        for (int i = 2; i < n + 2; ++i) b.node({i, i + 1});
        b.node({n + 2, n + 3});
        b.node({n + 2, n + 4});
        if (rd.c_v == 2) b.swap({{n + 3, n + 4}});
        return b.c;
    }
    case KodairaType::IVs: {
        // arms (0,1), (4,3), (6,5) around the centre 2
        Builder b({1, 2, 3, 2, 1, 2, 1});
        b.chain({0, 1, 2, 3, 4});
        b.chain({2, 5, 6});
        if (rd.c_v != 3) b.swap({{3, 5}, {4, 6}});
        return b.c;
    }
    case KodairaType::IIIs: {
        Builder b({1, 2, 3, 4, 3, 2, 1, 2});
        b.chain({0, 1, 2, 3, 4, 5, 6});
        b.node({3, 7});
        return b.c;
    }
    case KodairaType::IIs: {
        Builder b({1, 2, 3, 4, 5, 6, 4, 2, 3});
        b.chain({0, 1, 2, 3, 4, 5, 6, 7});
        b.node({5, 8});
        return b.c;
    }
    }
    throw Error("fiber_config: unknown type");
}

int64_t fiber_points(const ReductionData& rd, uint64_t Q, int k)
{
    if (rd.good()) throw Error("fiber_points at a good place " + rd.place.str());
    int64_t h1 = rd.multiplicative() ? rd.bad_trace(k) : 0;
    int64_t f = 1;
    for (int o : rd.orbits)
        if (k % o == 0) f += o;
    return 1 - h1 + int64_t(Q) * f;
}

namespace {
std::vector<int> perm_pow(const std::vector<int>& p, int k)
{
    std::vector<int> r(p.size());
    for (size_t i = 0; i < p.size(); ++i) {
        int j = int(i);
        for (int e = 0; e < k; ++e) j = p[j];
        r[i] = j;
    }
    return r;
}
}  // namespace

int64_t fiber_points_enumerated(const FiberConfig& c, uint64_t Q, int k)
{
    auto fc = perm_pow(c.frob, k);
    auto fb = perm_pow(c.branch_frob, k);
    int64_t n = 0;
    for (int i = 0; i < c.ncomp; ++i)
        if (fc[i] == i) n += int64_t(Q) + 1;
    std::vector<bool> node_fixed(c.nnodes, false);
    for (size_t b = 0; b < c.branches.size(); ++b) {
        if (fb[b] == int(b)) --n;
        if (c.branches[fb[b]].node == c.branches[b].node) node_fixed[c.branches[b].node] = true;
    }
    for (bool f : node_fixed) n += f;
    return n;
}

std::vector<std::vector<int>> intersection_matrix(const FiberConfig& c)
{
    std::vector<std::vector<int>> M(c.ncomp, std::vector<int>(c.ncomp, 0));
    if (c.ncomp > 1)
        for (int i = 0; i < c.ncomp; ++i) M[i][i] = -2;
    for (size_t a = 0; a < c.branches.size(); ++a)
        for (size_t b = a + 1; b < c.branches.size(); ++b) {
            auto& x = c.branches[a];
            auto& y = c.branches[b];
            if (x.node != y.node || x.comp == y.comp) continue;
            M[x.comp][y.comp] += c.node_intersection[x.node];
            M[y.comp][x.comp] += c.node_intersection[x.node];
        }
    return M;
}

std::vector<std::vector<int>> component_orbits(const FiberConfig& c)
{
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(c.ncomp, false);
    for (int i = 1; i < c.ncomp; ++i) {
        if (seen[i]) continue;
        std::vector<int> o;
        for (int j = i; !seen[j]; j = c.frob[j]) {
            seen[j] = true;
            o.push_back(j);
        }
        out.push_back(o);
    }
    return out;
}

std::vector<std::vector<int>> orbit_gram(const FiberConfig& c)
{
    auto M = intersection_matrix(c);
    auto orb = component_orbits(c);
    std::vector<std::vector<int>> G(orb.size(), std::vector<int>(orb.size(), 0));
    for (size_t i = 0; i < orb.size(); ++i)
        for (size_t j = 0; j < orb.size(); ++j)
            for (int a : orb[i])
                for (int b : orb[j]) G[i][j] += M[a][b];
    return G;
}

}  // namespace ellff
