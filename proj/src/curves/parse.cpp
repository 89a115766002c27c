#include <cctype>

#include "ellff/curves.hpp"

namespace ellff {

namespace {

using RF = RationalFunction;

struct Parser {
    const std::string& s;
    const FiniteField& F;
    size_t pos = 0;
    int line0 = 1;
    size_t col0 = 0;

    [[noreturn]] void fail(const std::string& msg) const
    {
        throw InputError("line " + std::to_string(line0) + ", column " + std::to_string(col0 + pos + 1) + ": " +
                         msg);
    }
    void ws()
    {
        while (pos < s.size() && std::isspace((unsigned char)s[pos])) ++pos;
    }
    bool eat(char c)
    {
        ws();
        if (pos < s.size() && s[pos] == c) {
            ++pos;
            return true;
        }
        return false;
    }
    int64_t integer()
    {
        ws();
        if (pos >= s.size() || !std::isdigit((unsigned char)s[pos])) fail("expected an integer");
        int64_t v = 0;
        while (pos < s.size() && std::isdigit((unsigned char)s[pos])) {
            v = v * 10 + (s[pos++] - '0');
            if (v > (int64_t(1) << 40)) fail("integer too large");
        }
        return v;
    }
    RF expr()
    {
        RF r = term();
        for (;;) {
            if (eat('+')) r = r + term();
            else if (eat('-')) r = r - term();
            else return r;
        }
    }
    RF term()
    {
        RF r = unary();
        for (;;) {
            if (eat('*')) {
                r = r * unary();
            } else if (eat('/')) {
                size_t at = pos;
                RF d = unary();
                if (d.is_zero()) {
                    pos = at;
                    fail("division by zero");
                }
                r = r / d;
            } else {
                // implicit product like 2t or 3(t+1)
                ws();
                if (pos < s.size() && (s[pos] == 't' || s[pos] == 'z' || s[pos] == '(')) {
                    r = r * unary();
                    continue;
                }
                return r;
            }
        }
    }
    RF unary()
    {
        if (eat('-')) return -unary();
        if (eat('+')) return unary();
        return power();
    }
    RF power()
    {
        RF b = atom();
        if (eat('^')) {
            bool neg = eat('-');
            int64_t e = integer();
            if (neg) {
                if (b.is_zero()) fail("zero to a negative power");
                e = -e;
            }
            return b.pow(e);
        }
        return b;
    }
    RF atom()
    {
        ws();
        if (pos >= s.size()) fail("unexpected end of expression");
        char c = s[pos];
        if (c == '(') {
            ++pos;
            RF r = expr();
            if (!eat(')')) fail("expected ')'");
            return r;
        }
        if (c == 't') {
            ++pos;
            return RF::t(F);
        }
        if (c == 'z') {
            ++pos;
            return RF::constant(Fq(F, F.q() > 2 ? 1u : 0u));
        }
        if (std::isdigit((unsigned char)c)) {
            int64_t v = integer();
            return RF::constant(F, int64_t(v % F.p()));
        }
        fail(std::string("unexpected character '") + c + "'");
    }
    void end()
    {
        ws();
        if (pos != s.size()) fail("trailing input '" + s.substr(pos) + "'");
    }
};

std::string trim(const std::string& s)
{
    size_t a = s.find_first_not_of(" \t\r\n"), b = s.find_last_not_of(" \t\r\n");
    return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

RationalFunction parse_rational(const std::string& s, const FiniteField& F)
{
    Parser P{s, F};
    RF r = P.expr();
    P.end();
    return r;
}

Place parse_place(const std::string& s0, const FiniteField& F)
{
    std::string s = trim(s0);
    if (s == "inf" || s == "infinity" || s == "oo") return Place::infinity(F);
    RF r = parse_rational(s, F);
    if (!r.is_poly() || r.num().degree() < 1) throw InputError("place '" + s + "' is not a nonconstant polynomial");
    if (!is_irreducible(r.num())) throw InputError("place '" + s + "' is not irreducible over " + F.name());
    return Place::finite(r.num());
}

EllipticCurveFF parse_curve(const std::string& text, const FiniteField& F)
{
    Weierstrass w;
    for (auto& c : w.a) c = RF(F);
    std::vector<Annotation> ann;
    bool seen[5] = {false, false, false, false, false};
    int line = 1;
    size_t start = 0;
    while (start <= text.size()) {
        size_t e = text.find_first_of("\n;", start);
        if (e == std::string::npos) e = text.size();
        std::string stmt = text.substr(start, e - start);
        size_t hash = stmt.find('#');
        if (hash != std::string::npos) stmt = stmt.substr(0, hash);
        std::string st = trim(stmt);
        if (st.rfind("annotate", 0) == 0) {
            size_t colon = st.find(':');
            if (colon == std::string::npos)
                throw InputError("line " + std::to_string(line) + ": annotation needs '<place>:'");
            Annotation a;
            a.place = parse_place(st.substr(8, colon - 8), F);
            std::string rest = st.substr(colon + 1);
            size_t i = 0;
            bool have_type = false;
            while (i < rest.size()) {
                while (i < rest.size() && (std::isspace((unsigned char)rest[i]) || rest[i] == ',')) ++i;
                if (i >= rest.size()) break;
                size_t j = i;
                while (j < rest.size() && !std::isspace((unsigned char)rest[j]) && rest[j] != ',') ++j;
                std::string kv = rest.substr(i, j - i);
                i = j;
                size_t eq = kv.find('=');
                if (eq == std::string::npos)
                    throw InputError("line " + std::to_string(line) + ": expected key=value, got '" + kv + "'");
                std::string k = kv.substr(0, eq), v = kv.substr(eq + 1);
                if (k == "type") {
                    a.type = KodairaType::parse(v);
                    have_type = true;
                } else if (k == "c") {
                    try {
                        a.c = std::stoi(v);
                    } catch (...) {
                        throw InputError("line " + std::to_string(line) + ": bad c value '" + v + "'");
                    }
                } else if (k == "split") {
                    if (v != "yes" && v != "no")
                        throw InputError("line " + std::to_string(line) + ": split must be yes or no");
                    a.split = v == "yes";
                } else {
                    throw InputError("line " + std::to_string(line) + ": unknown annotation key '" + k + "'");
                }
            }
            if (!have_type) throw InputError("line " + std::to_string(line) + ": annotation needs type=");
            ann.push_back(a);
        } else if (!st.empty()) {
            size_t i = 0;
            while (i <= stmt.size()) {
                size_t j = stmt.find(',', i);
                if (j == std::string::npos) j = stmt.size();
                std::string as = stmt.substr(i, j - i);
                if (!trim(as).empty()) {
                    size_t eq = as.find('=');
                    if (eq == std::string::npos)
                        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(i + 1) +
                                         ": expected a<i>=<expression>");
                    std::string name = trim(as.substr(0, eq));
                    static const char* names[5] = {"a1", "a2", "a3", "a4", "a6"};
                    int idx = -1;
                    for (int k = 0; k < 5; ++k)
                        if (name == names[k]) idx = k;
                    if (idx < 0)
                        throw InputError("line " + std::to_string(line) + ", column " + std::to_string(i + 1) +
                                         ": unknown coefficient '" + name + "'");
                    if (seen[idx])
                        throw InputError("line " + std::to_string(line) + ": coefficient " + name + " given twice");
                    seen[idx] = true;
                    std::string ex = as.substr(eq + 1);
                    Parser P{ex, F};
                    P.line0 = line;
                    P.col0 = i + eq + 1;
                    w.a[idx] = P.expr();
                    P.end();
                }
                i = j + 1;
            }
        }
        if (e < text.size() && text[e] == '\n') ++line;
        start = e + 1;
    }
    return EllipticCurveFF(w, ann);
}

CurvePoint parse_point(const std::string& s0, const FiniteField& F)
{
    std::string s = trim(s0);
    if (s == "O" || s == "0" || s == "inf") return CurvePoint::zero();
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw InputError("point must look like (x, y)");
    std::string in = s.substr(1, s.size() - 2);
    // split at the top-level comma
    int depth = 0;
    size_t cut = std::string::npos;
    for (size_t i = 0; i < in.size(); ++i) {
        if (in[i] == '(') ++depth;
        else if (in[i] == ')') --depth;
        else if (in[i] == ',' && depth == 0) cut = i;
    }
    if (cut == std::string::npos) throw InputError("point must look like (x, y)");
    return CurvePoint::affine(parse_rational(in.substr(0, cut), F), parse_rational(in.substr(cut + 1), F));
}

}  // namespace ellff
