#include "ellff/curves.hpp"

namespace ellff {

uint64_t count_cubic(const FiniteField& R, const std::array<uint32_t, 5>& a)
{
    const uint32_t q = R.q();
    const uint32_t a1 = a[0], a2 = a[1], a3 = a[2], a4 = a[3], a6 = a[4];
    uint64_t n = 1;
    if (R.p() == 2) {
        for (uint32_t c = 0; c < q; ++c) {
            uint32_t x = R.from_code(c);
            uint32_t g = R.add(R.mul(R.add(R.mul(R.add(x, a2), x), a4), x), a6);
            uint32_t h = R.add(R.mul(a1, x), a3);
            if (h == R.zero()) {
                n += 1;
            } else {
                uint32_t w = R.div(g, R.mul(h, h));
                if (R.trace2(w) == 0) n += 2;
            }
        }
        return n;
    }
    const uint32_t four = R.from_int(4);
    for (uint32_t c = 0; c < q; ++c) {
        uint32_t x = R.from_code(c);
        uint32_t g = R.add(R.mul(R.add(R.mul(R.add(x, a2), x), a4), x), a6);
        uint32_t h = R.add(R.mul(a1, x), a3);
        n += uint64_t(1 + R.chi(R.add(R.mul(four, g), R.mul(h, h))));
    }
    return n;
}

uint64_t count_cubic_pairs(const FiniteField& R, const std::array<uint32_t, 5>& a)
{
    const uint32_t q = R.q();
    uint64_t n = 1;
    for (uint32_t cx = 0; cx < q; ++cx) {
        uint32_t x = R.from_code(cx);
        uint32_t rhs = R.add(R.mul(R.add(R.mul(R.add(x, a[1]), x), a[3]), x), a[4]);
        for (uint32_t cy = 0; cy < q; ++cy) {
            uint32_t y = R.from_code(cy);
            uint32_t lhs = R.mul(R.add(R.add(y, R.mul(a[0], x)), a[2]), y);
            if (lhs == rhs) ++n;
        }
    }
    return n;
}

std::array<uint32_t, 5> reduced_model(const ReductionData& rd, int k)
{
    const FiniteField& Rv = residue_field(rd.local_place);
    const FiniteField& Rk = FiniteField::get(Rv.p(), Rv.m() * uint32_t(k));
    const Embedding& e = embedding(Rv, Rk);
    std::array<uint32_t, 5> out;
    for (int i = 0; i < 5; ++i) out[i] = e(reduce_at(rd.model.a[i], rd.local_place).raw());
    return out;
}

namespace {
ReductionData data_at(const EllipticCurveFF& E, const Place& v)
{
    if (auto* rd = E.local_at(v)) return *rd;
    return classify_reduction(E, v);
}
}  // namespace

uint64_t count_points_reduced(const EllipticCurveFF& E, const Place& v)
{
    ReductionData rd = data_at(E, v);
    return count_cubic(residue_field(rd.local_place), reduced_model(rd, 1));
}

int64_t good_trace(const ReductionData& rd, int k)
{
    if (!rd.good()) throw Error("good_trace at a bad place " + rd.place.str());
    if (k == 1 && rd.trace) return *rd.trace;
    const FiniteField& Rv = residue_field(rd.local_place);
    const FiniteField& Rk = FiniteField::get(Rv.p(), Rv.m() * uint32_t(k));
    return int64_t(Rk.q()) + 1 - int64_t(count_cubic(Rk, reduced_model(rd, k)));
}

bool reduce_point(const EllipticCurveFF& E, const CurvePoint& P, const Place& v, uint32_t& x, uint32_t& y)
{
    if (P.inf) return false;
    ReductionData rd = data_at(E, v);
    CurvePoint Q = P;
    if (v.infinite) Q = CurvePoint::affine(P.x.at_infinity(), P.y.at_infinity());
    Q = Q.in_frame(rd.transform);
    if (!Q.x.is_zero() && valuation(Q.x, rd.local_place) < 0) return false;
    x = reduce_at(Q.x, rd.local_place).raw();
    y = reduce_at(Q.y, rd.local_place).raw();
    return true;
}

HyperellipticCurveFF::HyperellipticCurveFF(int g, std::vector<RationalFunction> rhs) : g_(g), rhs_(std::move(rhs))
{
    if (g < 1) throw InputError("genus must be positive");
    while (!rhs_.empty() && rhs_.back().is_zero()) rhs_.pop_back();
    int deg = int(rhs_.size()) - 1;
    if (deg != 2 * g + 1 && deg != 2 * g + 2)
        throw InputError("hyperelliptic right-hand side must have degree 2g+1 or 2g+2");
    if (rhs_.front().field().p() == 2) throw InputError("hyperelliptic counting needs odd characteristic");
}

uint64_t count_points_hyperelliptic(const HyperellipticCurveFF& X, const Place& v)
{
    const FiniteField& R = residue_field(v);
    std::vector<uint32_t> c;
    for (auto& a : X.rhs()) c.push_back(reduce_at(a, v).raw());
    FqPoly f(R, c);
    int deg = int(X.rhs().size()) - 1;
    if (f.degree() != deg || gcd(f, f.derivative()).degree() > 0)
        throw Error("bad reduction of the hyperelliptic curve at " + v.str());
    uint64_t n = 0;
    for (uint32_t code = 0; code < R.q(); ++code) {
        uint32_t x = R.from_code(code);
        n += uint64_t(1 + R.chi(f.eval(Fq(R, x)).raw()));
    }
    if (deg % 2) n += 1;
    else if (R.is_square(f.lead().raw())) n += 2;
    return n;
}

}  // namespace ellff
