#pragma once

// Polynomial normal form of arithmetic constraints: sum of c * x1^k1 * ... * xn^kn.

#include "tdt/solver.hpp"

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace tdt::arith {

/// Sorted by variable name; powers >= 1. The empty monomial is the constant term.
using Monomial = std::vector<std::pair<std::string, int>>;

struct Poly {
    std::map<Monomial, Rational> terms;

    static Poly constant(const Rational& c);
    static Poly variable(const std::string& name);

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator*(const Poly& o) const;
    Poly scaled(const Rational& k) const;

    bool is_constant() const;
    Rational constant_term() const;
    int degree() const;
    bool is_linear() const { return degree() <= 1; }
    std::vector<std::string> variables() const;
    /// Highest power of `var` in any monomial (0 if absent).
    int degree_in(const std::string& var) const;

    /// Replace `var` by the constant `value`.
    Poly substitute(const std::string& var, const Rational& value) const;
    /// Replace `var` by a polynomial.
    Poly substitute(const std::string& var, const Poly& value) const;

    std::optional<Rational> evaluate(const Assignment& a) const;
    std::string to_string() const;

    bool operator==(const Poly&) const = default;
};

/// p rel 0.
enum class Rel { Eq, Lt, Le };

struct Constraint {
    Poly p;
    Rel rel = Rel::Eq;

    bool operator==(const Constraint&) const = default;
};

bool holds_exactly(const Constraint& c, const Assignment& a);

/// Builds polynomial constraints for a conjunction of comparisons. A quotient
/// by a non-constant term becomes a fresh variable "$qN" with q * den = num
/// added as an extra equality (a relaxation: exact checks use the original terms).
class Normalizer {
public:
    Constraint convert(const Comparison& c);
    const std::vector<Constraint>& side_conditions() const { return side_; }

private:
    Poly convert(const Term& t);

    std::vector<Constraint> side_;
    std::map<std::string, std::string> quotient_names_;
};

std::string monomial_name(const Monomial& m);

} // namespace tdt::arith
