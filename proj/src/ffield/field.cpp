#include <algorithm>
#include <numeric>
#include <tuple>
#include <map>
#include <mutex>
#include <shared_mutex>
#include <sstream>

#include "ellff/ffield.hpp"

namespace ellff {

uint64_t ipow(uint64_t b, unsigned e)
{
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

bool is_prime(uint64_t n)
{
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<uint64_t> prime_factors(uint64_t n)
{
    std::vector<uint64_t> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

uint64_t multiplicative_order(uint64_t q, uint64_t d)
{
    if (d == 1) return 1;
    uint64_t x = q % d, k = 1;
    if (std::gcd(q, d) != 1) throw InputError("order undefined: gcd(q,d) != 1");
    while (x != 1) {
        x = x * (q % d) % d;
        ++k;
    }
    return k;
}

namespace {

// arithmetic in F_p[x] on plain digit vectors, used only during setup
using dpoly = std::vector<uint32_t>;

void trim(dpoly& a)
{
    while (!a.empty() && a.back() == 0) a.pop_back();
}

uint32_t inv_mod(uint32_t a, uint32_t p)
{
    int64_t t = 0, nt = 1, r = p, nr = a;
    while (nr) {
        int64_t qq = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
        std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
    }
    return uint32_t((t % (int64_t)p + p) % p);
}

dpoly dmod(dpoly a, const dpoly& f, uint32_t p)
{
    trim(a);
    int df = int(f.size()) - 1;
    uint32_t il = inv_mod(f.back(), p);
    while (int(a.size()) - 1 >= df) {
        int s = int(a.size()) - 1 - df;
        uint64_t c = (uint64_t)a.back() * il % p;
        for (int i = 0; i <= df; ++i)
            a[s + i] = uint32_t((a[s + i] + (uint64_t)(p - c) * f[i]) % p);
        trim(a);
    }
    return a;
}

dpoly dmulmod(const dpoly& a, const dpoly& b, const dpoly& f, uint32_t p)
{
    if (a.empty() || b.empty()) return {};
    dpoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (!a[i]) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = uint32_t((r[i + j] + (uint64_t)a[i] * b[j]) % p);
    }
    return dmod(r, f, p);
}

dpoly dpowmod(dpoly a, uint64_t e, const dpoly& f, uint32_t p)
{
    dpoly r{1};
    r = dmod(r, f, p);
    a = dmod(a, f, p);
    while (e) {
        if (e & 1) r = dmulmod(r, a, f, p);
        e >>= 1;
        if (e) a = dmulmod(a, a, f, p);
    }
    return r;
}

dpoly dgcd(dpoly a, dpoly b, uint32_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        dpoly r = dmod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

dpoly dsub(dpoly a, const dpoly& b, uint32_t p)
{
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
    trim(a);
    return a;
}

bool digit_irreducible(const dpoly& f, uint32_t p)
{
    int m = int(f.size()) - 1;
    if (m == 1) return true;
    dpoly x{0, 1};
    std::vector<dpoly> frob(m + 1);
    frob[0] = x;
    for (int k = 1; k <= m; ++k) frob[k] = dpowmod(frob[k - 1], p, f, p);
    if (dsub(frob[m], x, p).size() != 0) return false;
    for (uint64_t r : prime_factors(m)) {
        dpoly g = dgcd(f, dsub(frob[m / r], x, p), p);
        if (g.size() > 1) return false;
    }
    return true;
}

struct Registry {
    std::shared_mutex mu;
    std::map<std::pair<uint32_t, uint32_t>, std::unique_ptr<FiniteField>> fields;
    std::map<std::pair<const FiniteField*, const FiniteField*>, std::unique_ptr<Embedding>> embs;
    std::mutex build_mu;
};

Registry& registry()
{
    static Registry r;
    return r;
}

}  // namespace

uint64_t FiniteField::size_limit() { return uint64_t(1) << 26; }

FiniteField::FiniteField(uint32_t p, uint32_t m) : p_(p), m_(m)
{
    q_ = uint32_t(ipow(p, m));
    z_ = q_ - 1;
    half_ = p == 2 ? 0 : z_ / 2;
}

const FiniteField& FiniteField::get(uint32_t p, uint32_t m)
{
    if (m == 0) throw InputError("extension degree must be positive");
    if (p > 65521 || !is_prime(p)) throw InputError("characteristic " + std::to_string(p) + " is not a supported prime");
    long double sz = 1;
    for (uint32_t i = 0; i < m; ++i) sz *= p;
    if (sz > (long double)size_limit())
        throw InputError("field F_" + std::to_string(p) + "^" + std::to_string(m) + " exceeds the supported size");
    Registry& R = registry();
    {
        std::shared_lock lk(R.mu);
        auto it = R.fields.find({p, m});
        if (it != R.fields.end()) return *it->second;
    }
    // tables can be large; build outside the map lock but one at a time
    std::lock_guard bl(R.build_mu);
    {
        std::shared_lock lk(R.mu);
        auto it = R.fields.find({p, m});
        if (it != R.fields.end()) return *it->second;
    }
    std::unique_ptr<FiniteField> F(new FiniteField(p, m));
    F->build();
    std::unique_lock lk(R.mu);
    auto& slot = R.fields[{p, m}];
    slot = std::move(F);
    return *slot;
}

void FiniteField::build()
{
    const uint32_t p = p_, m = m_;
    // least monic irreducible, ordering by sum c_i p^i
    dpoly f;
    if (m == 1) {
        f = {0, 1};
    } else {
        for (uint32_t code = 0; code < q_; ++code) {
            dpoly g(m + 1);
            uint32_t c = code;
            for (uint32_t i = 0; i < m; ++i) {
                g[i] = c % p;
                c /= p;
            }
            g[m] = 1;
            if (g[0] == 0) continue;
            if (digit_irreducible(g, p)) {
                f = g;
                break;
            }
        }
    }
    modulus_.assign(f.begin(), f.begin() + m);

    auto decode = [&](uint32_t code) {
        dpoly d(m);
        for (uint32_t i = 0; i < m; ++i) {
            d[i] = code % p;
            code /= p;
        }
        trim(d);
        return d;
    };
    // least primitive element by code
    const uint64_t order = z_;
    auto pf = prime_factors(order);
    gen_code_ = 0;
    if (q_ == 2) {
        gen_code_ = 1;
    } else {
        for (uint32_t code = 1; code < q_; ++code) {
            dpoly g = decode(code);
            bool ok = true;
            for (uint64_t l : pf) {
                dpoly r = dpowmod(g, order / l, f, p);
                if (r.size() == 1 && r[0] == 1) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                gen_code_ = code;
                break;
            }
        }
    }

    exp_.assign(z_, 0);
    log_.assign(q_, z_);
    zech_.assign(z_, z_);
    // multiplication by g via its nonzero digits, then reduction by x^m
    dpoly g = decode(gen_code_);
    std::vector<uint32_t> cur(m, 0), nxt(2 * m, 0);
    cur[0] = 1;
    std::vector<uint32_t> pw(m);
    pw[0] = 1;
    for (uint32_t i = 1; i < m; ++i) pw[i] = pw[i - 1] * p;
    for (uint64_t k = 0; k < order; ++k) {
        uint32_t code = 0;
        for (uint32_t i = 0; i < m; ++i) code += cur[i] * pw[i];
        if (log_[code] != z_) throw Error("internal: generator is not primitive");
        exp_[k] = code;
        log_[code] = uint32_t(k);
        std::fill(nxt.begin(), nxt.end(), 0);
        for (size_t j = 0; j < g.size(); ++j) {
            if (!g[j]) continue;
            for (uint32_t i = 0; i < m; ++i) nxt[i + j] = (nxt[i + j] + cur[i] * g[j]) % p;
        }
        for (int i = int(2 * m) - 1; i >= int(m); --i) {
            uint32_t c = nxt[i];
            if (!c) continue;
            nxt[i] = 0;
            // x^m = -sum f_j x^j
            for (uint32_t j = 0; j < m; ++j)
                nxt[i - m + j] = (nxt[i - m + j] + (p - c) * f[j]) % p;
        }
        for (uint32_t i = 0; i < m; ++i) cur[i] = nxt[i];
    }
    for (uint64_t k = 0; k < order; ++k) {
        uint32_t c = exp_[k];
        uint32_t d0 = c % p;
        uint32_t c1 = c - d0 + (d0 + 1) % p;
        zech_[k] = log_[c1];
    }
    if (p == 2) {
        trace_mask_ = 0;
        for (uint32_t i = 0; i < m; ++i) {
            uint32_t a = log_[1u << i];
            uint32_t s = z_, b = a;
            for (uint32_t j = 0; j < m; ++j) {
                s = add(s, b);
                b = frob(b);
            }
            if (s != z_) trace_mask_ |= 1u << i;
        }
    }
}

uint32_t FiniteField::inv(uint32_t a) const
{
    if (a == z_) throw Error("division by zero in " + name());
    return a == 0 ? 0 : z_ - a;
}

uint32_t FiniteField::pow(uint32_t a, int64_t e) const
{
    if (a == z_) {
        if (e == 0) return 0;
        if (e < 0) throw Error("division by zero in " + name());
        return z_;
    }
    int64_t r = (int64_t)((__int128)a * e % (int64_t)z_);
    if (r < 0) r += z_;
    return uint32_t(r);
}

int FiniteField::trace2(uint32_t a) const
{
    if (a == z_) return 0;
    return __builtin_popcount(exp_[a] & trace_mask_) & 1;
}

bool FiniteField::is_square(uint32_t a) const
{
    if (a == z_ || p_ == 2) return true;
    return (a & 1u) == 0;
}

uint32_t FiniteField::sqrt(uint32_t a) const
{
    if (a == z_) return z_;
    if (p_ == 2) {
        // q-1 odd: halve the log modulo q-1
        return uint32_t((uint64_t)a * (q_ / 2) % z_);
    }
    if (a & 1u) throw Error("not a square in " + name());
    return a / 2;
}

uint32_t FiniteField::from_int(int64_t n) const
{
    int64_t r = n % (int64_t)p_;
    if (r < 0) r += p_;
    return log_[uint32_t(r)];
}

int64_t FiniteField::prime_value(uint32_t a) const
{
    uint32_t c = code(a);
    return c < p_ ? int64_t(c) : -1;
}

uint32_t FiniteField::zeta(uint32_t d) const
{
    if (d == 0 || z_ % d != 0)
        throw InputError(std::to_string(d) + " does not divide " + std::to_string(z_) + " in " + name());
    return z_ / d;
}

uint32_t FiniteField::order_of(uint32_t a) const
{
    if (a == z_) throw Error("zero has no multiplicative order");
    return uint32_t(z_ / std::gcd(z_, a == 0 ? z_ : a));
}

std::string FiniteField::to_string(uint32_t a) const
{
    int64_t pv = prime_value(a);
    if (pv >= 0) return std::to_string(pv);
    return "z^" + std::to_string(a);
}

std::string FiniteField::name() const
{
    if (m_ == 1) return "F_" + std::to_string(p_);
    return "F_" + std::to_string(p_) + "^" + std::to_string(m_);
}

bool Embedding::pull(uint32_t b, uint32_t& out) const
{
    if (b == to->zero()) {
        out = from->zero();
        return true;
    }
    uint64_t c = to->zero() / from->zero();
    if (b % c) return false;
    uint64_t bb = b / c, j = factor / c, n = from->zero();
    // solve k*j = bb mod n, gcd(j, n) = 1
    int64_t t = 0, nt = 1, r = n, nr = j % n;
    while (nr) {
        int64_t qq = r / nr;
        std::tie(t, nt) = std::make_pair(nt, t - qq * nt);
        std::tie(r, nr) = std::make_pair(nr, r - qq * nr);
    }
    uint64_t ji = uint64_t((t % (int64_t)n + (int64_t)n) % (int64_t)n);
    out = uint32_t((unsigned __int128)bb * ji % n);
    return true;
}

const Embedding& embedding(const FiniteField& from, const FiniteField& to)
{
    if (from.p() != to.p() || to.m() % from.m() != 0)
        throw Error("no embedding " + from.name() + " -> " + to.name());
    Registry& R = registry();
    {
        std::shared_lock lk(R.mu);
        auto it = R.embs.find({&from, &to});
        if (it != R.embs.end()) return *it->second;
    }
    auto e = std::make_unique<Embedding>();
    e->from = &from;
    e->to = &to;
    if (&from == &to) {
        e->factor = 1;
    } else {
        // roots of the small modulus lie in the subgroup of index c
        uint64_t c = to.zero() / from.zero();
        const auto& fm = from.modulus();
        uint32_t theta = to.zero();
        if (from.m() == 1) {
            theta = to.zero();  // modulus x, root 0
        } else {
            for (uint64_t k = 0; k * c < to.zero(); ++k) {
                uint32_t th = uint32_t(k * c);
                // x^m + sum f_i x^i at th
                uint32_t v = to.pow(th, from.m());
                for (uint32_t i = 0; i < from.m(); ++i)
                    v = to.add(v, to.mul(to.from_int(fm[i]), to.pow(th, i)));
                if (v == to.zero()) {
                    theta = th;
                    break;
                }
            }
            if (theta == to.zero()) throw Error("internal: modulus has no root in " + to.name());
        }
        // image of the small generator: its digits evaluated at theta
        uint32_t gc = from.generator_code(), img = to.zero();
        uint32_t pw = 0;  // theta^0
        for (uint32_t i = 0; i < from.m(); ++i) {
            uint32_t d = gc % from.p();
            gc /= from.p();
            if (d) img = to.add(img, to.mul(to.from_int(d), pw));
            pw = to.mul(pw, theta);
        }
        e->factor = img;
    }
    std::unique_lock lk(R.mu);
    auto& slot = R.embs[{&from, &to}];
    if (!slot) slot = std::move(e);
    return *slot;
}

void Fq::check(const Fq& b) const
{
    if (F_ != b.F_) throw Error("mixing elements of different fields");
}

}  // namespace ellff
