#pragma once

// Closed intervals over the extended rationals with outward rounding.

#include "tdt/rational.hpp"

#include <string>

namespace tdt::arith {

/// A rational or an infinity (inf = -1 or +1; v is then ignored).
struct XR {
    int inf = 0;
    Rational v;

    static XR finite(const Rational& r) { return XR{0, r}; }
    static XR pos_inf() { return XR{1, 0}; }
    static XR neg_inf() { return XR{-1, 0}; }

    bool is_finite() const { return inf == 0; }
    int sign() const;
};

bool operator<(const XR& a, const XR& b);
bool operator==(const XR& a, const XR& b);
inline bool operator<=(const XR& a, const XR& b) { return !(b < a); }
inline bool operator>(const XR& a, const XR& b) { return b < a; }

struct Interval {
    XR lo = XR::neg_inf();
    XR hi = XR::pos_inf();

    static Interval entire() { return {}; }
    static Interval point(const Rational& r) { return {XR::finite(r), XR::finite(r)}; }
    static Interval make(XR lo, XR hi) { return {std::move(lo), std::move(hi)}; }

    bool empty() const { return hi < lo; }
    bool bounded() const { return lo.is_finite() && hi.is_finite(); }
    bool is_point() const { return bounded() && lo.v == hi.v; }
    bool contains_zero() const;
    /// Width as a rational (only meaningful when bounded).
    Rational width() const;
    std::string to_string() const;
};

Interval operator+(const Interval& a, const Interval& b);
Interval operator-(const Interval& a, const Interval& b);
Interval operator*(const Interval& a, const Interval& b);
Interval scale(const Interval& a, const Rational& k);
/// Entire line when `b` contains zero (no narrowing possible).
Interval divide(const Interval& a, const Interval& b);
Interval power(const Interval& a, int k);
/// Values x in `domain` with x^k in `target`.
Interval root(const Interval& target, int k, const Interval& domain);
Interval intersect(const Interval& a, const Interval& b);
Interval hull(const Interval& a, const Interval& b);

/// Keeps endpoint sizes bounded: endpoints with huge numerators or
/// denominators are rounded outward to a 2^-64 grid.
Interval tidy(const Interval& a);

} // namespace tdt::arith
