#pragma once

// integer and rational polynomials, coefficient lists from the constant
// term up, and a few exact helpers around them

#include <gmpxx.h>

#include <string>
#include <vector>

namespace ellff {

using ZPoly = std::vector<mpz_class>;
using QPoly = std::vector<mpq_class>;

void trim(ZPoly& f);
void trim(QPoly& f);
int degree(const ZPoly& f);
ZPoly zmul(const ZPoly& a, const ZPoly& b);
ZPoly zpow(const ZPoly& a, int e);
// 1 - c T^k
ZPoly one_minus(const mpz_class& c, int k);
// exact division, throws if not exact
ZPoly zdiv(const ZPoly& a, const ZPoly& b);
bool zdivides(const ZPoly& b, const ZPoly& a);
mpq_class zeval(const ZPoly& f, const mpq_class& x);

// p_n = sum of n-th powers of the inverse roots, from f = prod (1 - b_i T);
// and back
std::vector<mpz_class> power_sums(const ZPoly& f, int n_max);
ZPoly from_power_sums(const std::vector<mpz_class>& s, int deg);

QPoly to_q(const ZPoly& f);
QPoly qmod(const QPoly& a, const QPoly& b);
QPoly qdiv(const QPoly& a, const QPoly& b);
QPoly qgcd(QPoly a, QPoly b);
QPoly qderiv(const QPoly& f);
// squarefree parts f = prod g_i^i over Q
std::vector<std::pair<QPoly, int>> q_squarefree(const QPoly& f);

std::string zstr(const ZPoly& f, const char* var = "T");
std::string qstr(const mpq_class& x);

}  // namespace ellff
