#include "ellff/zpoly.hpp"

#include "ellff/errors.hpp"

namespace ellff {

void trim(ZPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

void trim(QPoly& f)
{
    while (!f.empty() && f.back() == 0) f.pop_back();
}

int degree(const ZPoly& f)
{
    ZPoly g = f;
    trim(g);
    return int(g.size()) - 1;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b)
{
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        if (a[i] != 0)
            for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    trim(r);
    return r;
}

ZPoly zpow(const ZPoly& a, int e)
{
    ZPoly r{1};
    for (int i = 0; i < e; ++i) r = zmul(r, a);
    return r;
}

ZPoly one_minus(const mpz_class& c, int k)
{
    ZPoly r(k + 1, 0);
    r[0] = 1;
    r[k] -= c;
    trim(r);
    return r;
}

static bool zdivmod(const ZPoly& a0, const ZPoly& b0, ZPoly& q)
{
    ZPoly a = a0, b = b0;
    trim(a);
    trim(b);
    if (b.empty()) throw Error("polynomial division by zero");
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    // divide from the low end: b has nonzero constant term in our uses,
    // but the general case goes from the top
    for (int i = int(a.size()) - int(b.size()); i >= 0; --i) {
        const mpz_class& top = a[i + b.size() - 1];
        if (top == 0) continue;
        if (!mpz_divisible_p(top.get_mpz_t(), b.back().get_mpz_t())) return false;
        mpz_class c = top / b.back();
        q[i] = c;
        for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
    }
    trim(a);
    trim(q);
    return a.empty();
}

ZPoly zdiv(const ZPoly& a, const ZPoly& b)
{
    ZPoly q;
    if (!zdivmod(a, b, q)) throw Error("inexact integer polynomial division");
    return q;
}

bool zdivides(const ZPoly& b, const ZPoly& a)
{
    ZPoly q;
    return zdivmod(a, b, q);
}

mpq_class zeval(const ZPoly& f, const mpq_class& x)
{
    mpq_class r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

std::vector<mpz_class> power_sums(const ZPoly& f, int n_max)
{
    // f = 1 + c1 T + ...;  n c_n + sum_{i=1}^{n} s_i c_{n-i} = 0
    auto c = [&](int k) -> mpz_class { return k < int(f.size()) ? f[k] : mpz_class(0); };
    if (f.empty() || f[0] != 1) throw Error("power_sums: constant term must be 1");
    std::vector<mpz_class> s(n_max + 1, 0);
    for (int n = 1; n <= n_max; ++n) {
        mpz_class acc = n * c(n);
        for (int i = 1; i < n; ++i) acc += s[i] * c(n - i);
        s[n] = -acc;
    }
    return s;
}

ZPoly from_power_sums(const std::vector<mpz_class>& s, int deg)
{
    ZPoly c(deg + 1, 0);
    c[0] = 1;
    for (int n = 1; n <= deg; ++n) {
        mpz_class acc = 0;
        for (int i = 1; i <= n; ++i) acc += s[i] * c[n - i];
        if (!mpz_divisible_ui_p(acc.get_mpz_t(), (unsigned long)n))
            throw VerificationError("power sums do not give an integer polynomial at degree " + std::to_string(n));
        c[n] = -acc / n;
    }
    trim(c);
    return c;
}

QPoly to_q(const ZPoly& f)
{
    QPoly r;
    for (auto& c : f) r.push_back(mpq_class(c));
    trim(r);
    return r;
}

static void qdivmod(const QPoly& a0, const QPoly& b0, QPoly& q, QPoly& r)
{
    QPoly a = a0, b = b0;
    trim(a);
    trim(b);
    if (b.empty()) throw Error("polynomial division by zero");
    q.assign(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    for (int i = int(a.size()) - int(b.size()); i >= 0; --i) {
        mpq_class c = a[i + b.size() - 1] / b.back();
        q[i] = c;
        if (c == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) a[i + j] -= c * b[j];
    }
    trim(a);
    trim(q);
    r = a;
}

QPoly qmod(const QPoly& a, const QPoly& b)
{
    QPoly q, r;
    qdivmod(a, b, q, r);
    return r;
}

QPoly qdiv(const QPoly& a, const QPoly& b)
{
    QPoly q, r;
    qdivmod(a, b, q, r);
    return q;
}

QPoly qgcd(QPoly a, QPoly b)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        QPoly r = qmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class l = a.back();
        for (auto& c : a) c /= l;
    }
    return a;
}

QPoly qderiv(const QPoly& f)
{
    QPoly r;
    for (size_t i = 1; i < f.size(); ++i) r.push_back(f[i] * int(i));
    trim(r);
    return r;
}

std::vector<std::pair<QPoly, int>> q_squarefree(const QPoly& f0)
{
    std::vector<std::pair<QPoly, int>> out;
    QPoly f = f0;
    trim(f);
    if (f.size() <= 1) return out;
    QPoly c = qgcd(f, qderiv(f));
    QPoly w = qdiv(f, c);
    int i = 1;
    while (w.size() > 1) {
        QPoly y = qgcd(w, c);
        QPoly z = qdiv(w, y);
        if (z.size() > 1) out.push_back({z, i});
        w = y;
        c = qdiv(c, y);
        ++i;
    }
    return out;
}

std::string zstr(const ZPoly& f, const char* var)
{
    std::string s;
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i] == 0) continue;
        std::string c = f[i].get_str();
        if (!s.empty()) s += f[i] > 0 ? " + " : " - ";
        else if (f[i] < 0) s += "-";
        if (c[0] == '-') c = c.substr(1);
        if (i == 0) s += c;
        else {
            if (c != "1") s += c + "*";
            s += var;
            if (i > 1) s += "^" + std::to_string(i);
        }
    }
    return s.empty() ? "0" : s;
}

std::string qstr(const mpq_class& x)
{
    mpq_class y = x;
    y.canonicalize();
    if (y.get_den() == 1) return y.get_num().get_str();
    return y.get_num().get_str() + "/" + y.get_den().get_str();
}

}  // namespace ellff
