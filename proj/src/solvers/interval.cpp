#include "interval.hpp"

#include <cmath>

namespace tdt::arith {

namespace {

XR add(const XR& a, const XR& b)
{
    if (a.inf)
        return a;
    if (b.inf)
        return b;
    return XR::finite(a.v + b.v);
}

XR neg(const XR& a)
{
    if (a.inf)
        return XR{-a.inf, 0};
    return XR::finite(-a.v);
}

XR mul(const XR& a, const XR& b)
{
    int sa = a.sign(), sb = b.sign();
    if (sa == 0 || sb == 0)
        return XR::finite(0);
    if (a.inf || b.inf)
        return XR{sa * sb, 0};
    return XR::finite(a.v * b.v);
}

XR min4(const XR& a, const XR& b, const XR& c, const XR& d)
{
    XR m = a;
    for (const XR* x : {&b, &c, &d})
        if (*x < m)
            m = *x;
    return m;
}

XR max4(const XR& a, const XR& b, const XR& c, const XR& d)
{
    XR m = a;
    for (const XR* x : {&b, &c, &d})
        if (m < *x)
            m = *x;
    return m;
}

Rational rpow(const Rational& r, int k)
{
    Rational out = 1;
    for (int i = 0; i < k; ++i)
        out *= r;
    return out;
}

XR xpow(const XR& a, int k)
{
    if (a.inf)
        return XR{(k % 2 == 0) ? 1 : a.inf, 0};
    return XR::finite(rpow(a.v, k));
}

const mpz_class& grid()
{
    static const mpz_class g = [] {
        mpz_class x;
        mpz_ui_pow_ui(x.get_mpz_t(), 2, 64);
        return x;
    }();
    return g;
}

bool oversized(const Rational& r)
{
    return mpz_sizeinbase(r.get_num().get_mpz_t(), 2) > 256 || mpz_sizeinbase(r.get_den().get_mpz_t(), 2) > 256;
}

Rational round_down(const Rational& r)
{
    mpz_class scaled_num = r.get_num() * grid();
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), r.get_den().get_mpz_t());
    Rational out(q, grid());
    out.canonicalize();
    return out;
}

Rational round_up(const Rational& r)
{
    mpz_class scaled_num = r.get_num() * grid();
    mpz_class q;
    mpz_cdiv_q(q.get_mpz_t(), scaled_num.get_mpz_t(), r.get_den().get_mpz_t());
    Rational out(q, grid());
    out.canonicalize();
    return out;
}

// Rational bounds on the non-negative real k-th root of q (q >= 0).
Rational root_down(const Rational& q, int k)
{
    if (q <= 0)
        return 0;
    double d = std::pow(q.get_d(), 1.0 / k);
    if (std::isfinite(d) && d > 0) {
        Rational cand(d * (1 - 1e-12));
        cand = round_down(cand);
        if (cand >= 0 && rpow(cand, k) <= q)
            return cand;
    }
    return 0;
}

Rational root_up(const Rational& q, int k)
{
    if (q <= 0)
        return 0;
    double d = std::pow(q.get_d(), 1.0 / k);
    if (std::isfinite(d)) {
        Rational cand(d * (1 + 1e-12) + 1e-300);
        cand = round_up(cand);
        if (rpow(cand, k) >= q)
            return cand;
    }
    return q > 1 ? q : Rational(1);
}

} // namespace

int XR::sign() const
{
    if (inf)
        return inf;
    return sgn(v);
}

bool operator<(const XR& a, const XR& b)
{
    if (a.inf || b.inf) {
        return a.inf < b.inf;
    }
    return a.v < b.v;
}

bool operator==(const XR& a, const XR& b)
{
    if (a.inf || b.inf)
        return a.inf == b.inf;
    return a.v == b.v;
}

bool Interval::contains_zero() const
{
    XR z = XR::finite(0);
    return lo <= z && z <= hi;
}

Rational Interval::width() const
{
    return hi.v - lo.v;
}

std::string Interval::to_string() const
{
    auto s = [](const XR& x) {
        if (x.inf)
            return std::string(x.inf < 0 ? "-inf" : "inf");
        return to_display_string(x.v);
    };
    return "[" + s(lo) + ", " + s(hi) + "]";
}

Interval operator+(const Interval& a, const Interval& b)
{
    return {add(a.lo, b.lo), add(a.hi, b.hi)};
}

Interval operator-(const Interval& a, const Interval& b)
{
    return {add(a.lo, neg(b.hi)), add(a.hi, neg(b.lo))};
}

Interval operator*(const Interval& a, const Interval& b)
{
    XR p1 = mul(a.lo, b.lo), p2 = mul(a.lo, b.hi), p3 = mul(a.hi, b.lo), p4 = mul(a.hi, b.hi);
    return {min4(p1, p2, p3, p4), max4(p1, p2, p3, p4)};
}

Interval scale(const Interval& a, const Rational& k)
{
    return a * Interval::point(k);
}

Interval divide(const Interval& a, const Interval& b)
{
    if (b.contains_zero())
        return Interval::entire();
    auto inv = [](const XR& x) {
        if (x.inf)
            return XR::finite(0);
        return XR::finite(1 / x.v);
    };
    Interval recip{inv(b.hi), inv(b.lo)};
    return a * recip;
}

Interval power(const Interval& a, int k)
{
    if (k == 1)
        return a;
    XR l = xpow(a.lo, k), h = xpow(a.hi, k);
    if (k % 2 == 1)
        return {l, h};
    if (a.lo.sign() >= 0)
        return {l, h};
    if (a.hi.sign() <= 0)
        return {h, l};
    return {XR::finite(0), l < h ? h : l};
}

Interval root(const Interval& target, int k, const Interval& domain)
{
    if (k == 1)
        return intersect(target, domain);
    auto up = [&](const XR& x) -> XR {
        if (x.inf)
            return x;
        if (x.v >= 0)
            return XR::finite(root_up(x.v, k));
        return XR::finite(-root_down(-x.v, k));
    };
    auto down = [&](const XR& x) -> XR {
        if (x.inf)
            return x;
        if (x.v >= 0)
            return XR::finite(root_down(x.v, k));
        return XR::finite(-root_up(-x.v, k));
    };
    if (k % 2 == 1)
        return intersect(Interval{down(target.lo), up(target.hi)}, domain);

    Interval t = intersect(target, Interval{XR::finite(0), XR::pos_inf()});
    if (t.empty())
        return t;
    XR rlo = down(t.lo), rhi = up(t.hi);
    Interval positive = intersect(Interval{rlo, rhi}, domain);
    Interval negative = intersect(Interval{neg(rhi), neg(rlo)}, domain);
    if (positive.empty())
        return negative;
    if (negative.empty())
        return positive;
    return hull(positive, negative);
}

Interval intersect(const Interval& a, const Interval& b)
{
    return {a.lo < b.lo ? b.lo : a.lo, b.hi < a.hi ? b.hi : a.hi};
}

Interval hull(const Interval& a, const Interval& b)
{
    return {a.lo < b.lo ? a.lo : b.lo, a.hi < b.hi ? b.hi : a.hi};
}

Interval tidy(const Interval& a)
{
    // Endpoints beyond the magnitude cap are widened outward; repeated
    // squaring during propagation would otherwise grow them without bound.
    static const Rational cap = [] {
        mpz_class x;
        mpz_ui_pow_ui(x.get_mpz_t(), 2, 128);
        return Rational(x);
    }();
    Interval out = a;
    if (out.lo.is_finite() && out.lo.v < -cap)
        out.lo = XR::neg_inf();
    else if (out.lo.is_finite() && out.lo.v > cap)
        out.lo.v = cap;
    if (out.hi.is_finite() && out.hi.v > cap)
        out.hi = XR::pos_inf();
    else if (out.hi.is_finite() && out.hi.v < -cap)
        out.hi.v = -cap;
    if (out.lo.is_finite() && oversized(out.lo.v))
        out.lo.v = round_down(out.lo.v);
    if (out.hi.is_finite() && oversized(out.hi.v))
        out.hi.v = round_up(out.hi.v);
    return out;
}

} // namespace tdt::arith
