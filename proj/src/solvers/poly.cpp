#include "poly.hpp"

#include <algorithm>
#include <set>

namespace tdt::arith {

namespace {

Monomial multiply(const Monomial& a, const Monomial& b)
{
    Monomial out;
    std::size_t i = 0, j = 0;
    while (i < a.size() || j < b.size()) {
        if (j == b.size() || (i < a.size() && a[i].first < b[j].first))
            out.push_back(a[i++]);
        else if (i == a.size() || b[j].first < a[i].first)
            out.push_back(b[j++]);
        else {
            out.emplace_back(a[i].first, a[i].second + b[j].second);
            ++i;
            ++j;
        }
    }
    return out;
}

void add_term(std::map<Monomial, Rational>& terms, const Monomial& m, const Rational& c)
{
    if (c == 0)
        return;
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0)
            terms.erase(it);
    }
}

Rational power(const Rational& base, int k)
{
    Rational r = 1;
    for (int i = 0; i < k; ++i)
        r *= base;
    return r;
}

} // namespace

Poly Poly::constant(const Rational& c)
{
    Poly p;
    add_term(p.terms, {}, c);
    return p;
}

Poly Poly::variable(const std::string& name)
{
    Poly p;
    p.terms.emplace(Monomial{{name, 1}}, Rational(1));
    return p;
}

Poly Poly::operator+(const Poly& o) const
{
    Poly r = *this;
    for (const auto& [m, c] : o.terms)
        add_term(r.terms, m, c);
    return r;
}

Poly Poly::operator-(const Poly& o) const
{
    return *this + o.scaled(-1);
}

Poly Poly::operator*(const Poly& o) const
{
    Poly r;
    for (const auto& [ma, ca] : terms)
        for (const auto& [mb, cb] : o.terms) {
            Rational prod = ca * cb;
            add_term(r.terms, multiply(ma, mb), prod);
        }
    return r;
}

Poly Poly::scaled(const Rational& k) const
{
    Poly r;
    if (k == 0)
        return r;
    for (const auto& [m, c] : terms) {
        Rational v = c * k;
        r.terms.emplace(m, v);
    }
    return r;
}

bool Poly::is_constant() const
{
    return terms.empty() || (terms.size() == 1 && terms.begin()->first.empty());
}

Rational Poly::constant_term() const
{
    auto it = terms.find(Monomial{});
    return it == terms.end() ? Rational(0) : it->second;
}

int Poly::degree() const
{
    int d = 0;
    for (const auto& [m, c] : terms) {
        int k = 0;
        for (const auto& [v, e] : m)
            k += e;
        d = std::max(d, k);
    }
    return d;
}

std::vector<std::string> Poly::variables() const
{
    std::set<std::string> vs;
    for (const auto& [m, c] : terms)
        for (const auto& [v, e] : m)
            vs.insert(v);
    return {vs.begin(), vs.end()};
}

int Poly::degree_in(const std::string& var) const
{
    int d = 0;
    for (const auto& [m, c] : terms)
        for (const auto& [v, e] : m)
            if (v == var)
                d = std::max(d, e);
    return d;
}

Poly Poly::substitute(const std::string& var, const Rational& value) const
{
    Poly r;
    for (const auto& [m, c] : terms) {
        Monomial rest;
        Rational coef = c;
        for (const auto& [v, e] : m) {
            if (v == var)
                coef *= power(value, e);
            else
                rest.emplace_back(v, e);
        }
        add_term(r.terms, rest, coef);
    }
    return r;
}

Poly Poly::substitute(const std::string& var, const Poly& value) const
{
    Poly r;
    for (const auto& [m, c] : terms) {
        Poly piece = constant(c);
        for (const auto& [v, e] : m) {
            if (v == var) {
                for (int i = 0; i < e; ++i)
                    piece = piece * value;
            } else {
                Poly single;
                single.terms.emplace(Monomial{{v, e}}, Rational(1));
                piece = piece * single;
            }
        }
        r = r + piece;
    }
    return r;
}

std::optional<Rational> Poly::evaluate(const Assignment& a) const
{
    Rational sum = 0;
    for (const auto& [m, c] : terms) {
        Rational t = c;
        for (const auto& [v, e] : m) {
            auto it = a.find(v);
            if (it == a.end())
                return std::nullopt;
            t *= power(it->second, e);
        }
        sum += t;
    }
    return sum;
}

std::string monomial_name(const Monomial& m)
{
    std::string out;
    for (const auto& [v, e] : m) {
        for (int i = 0; i < e; ++i)
            out += (out.empty() ? "" : "*") + v;
    }
    return out;
}

std::string Poly::to_string() const
{
    if (terms.empty())
        return "0";
    std::string out;
    for (const auto& [m, c] : terms) {
        if (!out.empty())
            out += " + ";
        out += to_display_string(c);
        if (!m.empty())
            out += "*" + monomial_name(m);
    }
    return out;
}

bool holds_exactly(const Constraint& c, const Assignment& a)
{
    auto v = c.p.evaluate(a);
    if (!v)
        return false;
    switch (c.rel) {
    case Rel::Eq: return *v == 0;
    case Rel::Lt: return *v < 0;
    case Rel::Le: return *v <= 0;
    }
    return false;
}

Constraint Normalizer::convert(const Comparison& c)
{
    Poly l = convert(c.lhs);
    Poly r = convert(c.rhs);
    switch (c.op) {
    case CmpOp::Eq: return {l - r, Rel::Eq};
    case CmpOp::Lt: return {l - r, Rel::Lt};
    case CmpOp::Le: return {l - r, Rel::Le};
    case CmpOp::Gt: return {r - l, Rel::Lt};
    case CmpOp::Ge: return {r - l, Rel::Le};
    }
    return {l - r, Rel::Eq};
}

Poly Normalizer::convert(const Term& t)
{
    switch (t.op) {
    case TermOp::Num: return Poly::constant(t.value);
    case TermOp::Var: return Poly::variable(t.name);
    case TermOp::Neg: return convert(t.args[0]).scaled(-1);
    case TermOp::Add: return convert(t.args[0]) + convert(t.args[1]);
    case TermOp::Sub: return convert(t.args[0]) - convert(t.args[1]);
    case TermOp::Mul: return convert(t.args[0]) * convert(t.args[1]);
    case TermOp::Div: {
        Poly num = convert(t.args[0]);
        Poly den = convert(t.args[1]);
        if (den.is_constant() && den.constant_term() != 0) {
            Rational inv = 1 / den.constant_term();
            return num.scaled(inv);
        }
        std::string key = print(t);
        auto it = quotient_names_.find(key);
        if (it == quotient_names_.end()) {
            std::string name = "$q" + std::to_string(quotient_names_.size() + 1);
            it = quotient_names_.emplace(key, name).first;
            side_.push_back(Constraint{Poly::variable(name) * den - num, Rel::Eq});
        }
        return Poly::variable(it->second);
    }
    }
    return {};
}

} // namespace tdt::arith
