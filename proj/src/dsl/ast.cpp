#include "tdt/ast.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace tdt {

namespace {

int precedence(const Term& t)
{
    switch (t.op) {
    case TermOp::Add:
    case TermOp::Sub: return 1;
    case TermOp::Mul:
    case TermOp::Div: return 2;
    case TermOp::Neg: return 3;
    case TermOp::Num: return t.value < 0 && has_finite_decimal(t.value) ? 3 : 4;
    case TermOp::Var: return 4;
    }
    return 4;
}

void print_term(std::ostream& os, const Term& t)
{
    auto operand = [&](const Term& sub, bool parens) {
        if (parens)
            os << "(";
        print_term(os, sub);
        if (parens)
            os << ")";
    };
    switch (t.op) {
    case TermOp::Num:
        if (has_finite_decimal(t.value))
            os << to_display_string(t.value);
        else
            os << "(" << to_fraction_string(t.value) << ")";
        return;
    case TermOp::Var:
        os << t.name;
        return;
    case TermOp::Neg:
        os << "-";
        operand(t.args[0], precedence(t.args[0]) < 3);
        return;
    default:
        break;
    }
    int p = precedence(t);
    const char* sym = t.op == TermOp::Add ? " + " : t.op == TermOp::Sub ? " - " : t.op == TermOp::Mul ? " * " : " / ";
    operand(t.args[0], precedence(t.args[0]) < p);
    os << sym;
    operand(t.args[1], precedence(t.args[1]) <= p);
}

int set_precedence(const SetTerm& t)
{
    switch (t.op) {
    case SetOp::Union:
    case SetOp::Diff: return 1;
    case SetOp::Inter: return 2;
    default: return 3;
    }
}

void print_set(std::ostream& os, const SetTerm& t)
{
    auto operand = [&](const SetTerm& sub, bool parens) {
        if (parens)
            os << "(";
        print_set(os, sub);
        if (parens)
            os << ")";
    };
    switch (t.op) {
    case SetOp::Name: os << t.name; return;
    case SetOp::Empty: os << "empty"; return;
    case SetOp::Literal: {
        os << "{";
        bool first = true;
        for (auto e : t.elements) {
            os << (first ? "" : ", ") << e;
            first = false;
        }
        os << "}";
        return;
    }
    default: break;
    }
    int p = set_precedence(t);
    const char* sym = t.op == SetOp::Union ? " union " : t.op == SetOp::Diff ? " diff " : " inter ";
    operand(t.args[0], set_precedence(t.args[0]) < p);
    os << sym;
    operand(t.args[1], set_precedence(t.args[1]) <= p);
}

std::string elements_text(const std::set<std::uint64_t>& elems)
{
    SetTerm t;
    t.op = SetOp::Literal;
    t.elements = elems;
    return print(t);
}

bool bare_constant(std::string_view s)
{
    if (s.empty())
        return false;
    if (std::islower(static_cast<unsigned char>(s.front())))
        return std::all_of(s.begin(), s.end(),
                           [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
    std::string_view digits = s.front() == '-' ? s.substr(1) : s;
    if (digits.empty() || !std::isdigit(static_cast<unsigned char>(digits.front())))
        return false;
    auto dot = digits.find('.');
    auto all_digits = [](std::string_view p) {
        return !p.empty() && std::all_of(p.begin(), p.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
    };
    if (dot == std::string_view::npos)
        return all_digits(digits);
    return all_digits(digits.substr(0, dot)) && all_digits(digits.substr(dot + 1));
}

std::string quote_atom(std::string_view s)
{
    if (bare_constant(s))
        return std::string(s);
    std::string out = "'";
    for (char c : s) {
        if (c == '\'')
            out += "''";
        else
            out += c;
    }
    return out + "'";
}

} // namespace

Term Term::num(const Rational& v)
{
    Term t;
    t.op = TermOp::Num;
    t.value = v;
    return t;
}

Term Term::var(std::string n)
{
    Term t;
    t.op = TermOp::Var;
    t.name = std::move(n);
    return t;
}

Term Term::binary(TermOp op, Term lhs, Term rhs)
{
    if (lhs.op == TermOp::Num && rhs.op == TermOp::Num) {
        switch (op) {
        case TermOp::Add: return num(lhs.value + rhs.value);
        case TermOp::Sub: return num(lhs.value - rhs.value);
        case TermOp::Mul: return num(lhs.value * rhs.value);
        case TermOp::Div:
            if (rhs.value != 0)
                return num(lhs.value / rhs.value);
            break;
        default: break;
        }
    }
    Term t;
    t.op = op;
    t.args.push_back(std::move(lhs));
    t.args.push_back(std::move(rhs));
    return t;
}

Term Term::neg(Term inner)
{
    if (inner.op == TermOp::Num)
        return num(-inner.value);
    Term t;
    t.op = TermOp::Neg;
    t.args.push_back(std::move(inner));
    return t;
}

std::string_view to_string(CmpOp op)
{
    switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
    }
    return "?";
}

std::string print(const Term& t)
{
    std::ostringstream os;
    print_term(os, t);
    return os.str();
}

std::string print(const Comparison& c)
{
    return print(c.lhs) + " " + std::string(to_string(c.op)) + " " + print(c.rhs);
}

std::string print(const ArithConj& c)
{
    std::string out;
    for (std::size_t i = 0; i < c.atoms.size(); ++i)
        out += (i ? " ; " : "") + print(c.atoms[i]);
    return out;
}

std::string print(const SetTerm& t)
{
    std::ostringstream os;
    print_set(os, t);
    return os.str();
}

std::string print(const SetAtom& a)
{
    auto elem = [&] { return a.elem.value ? std::to_string(*a.elem.value) : a.elem.name; };
    switch (a.kind) {
    case SetAtomKind::In: return elem() + " in " + print(a.rhs);
    case SetAtomKind::NotIn: return elem() + " notin " + print(a.rhs);
    case SetAtomKind::Eq: return print(a.lhs) + " = " + print(a.rhs);
    case SetAtomKind::Subset: return print(a.lhs) + " subset " + print(a.rhs);
    }
    return "?";
}

std::string print(const SetFormula& f)
{
    std::vector<std::string> parts;
    auto decl = [&](const char* kw, const std::vector<std::string>& names) {
        if (names.empty())
            return;
        std::string s = kw;
        for (std::size_t i = 0; i < names.size(); ++i)
            s += (i ? ", " : " ") + names[i];
        parts.push_back(s);
    };
    decl("Set", f.sets);
    decl("Elem", f.elems);
    for (const auto& a : f.atoms)
        parts.push_back(print(a));
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i)
        out += (i ? " " : "") + parts[i] + ";";
    return out;
}

std::string print(const ConcreteSetProgram& p)
{
    std::string out;
    for (const auto& b : p.bindings)
        out += (out.empty() ? "" : " ") + b.name + " = " + elements_text(b.elements) + ";";
    std::string goal = print(p.goal);
    if (!goal.empty())
        out += (out.empty() ? "" : " ") + goal;
    return out;
}

std::string print(const LTerm& t)
{
    return t.is_var ? t.name : quote_atom(t.name);
}

std::string print(const LAtom& a)
{
    std::string out = quote_atom(a.pred);
    if (!a.args.empty()) {
        out += "(";
        for (std::size_t i = 0; i < a.args.size(); ++i)
            out += (i ? ", " : "") + print(a.args[i]);
        out += ")";
    }
    return out;
}

std::string print(const Literal& l)
{
    return (l.negated ? "\\+ " : "") + print(l.atom);
}

std::string print(const Clause& c)
{
    std::string out = print(c.head);
    if (!c.body.empty()) {
        out += " :- ";
        for (std::size_t i = 0; i < c.body.size(); ++i)
            out += (i ? ", " : "") + print(c.body[i]);
    }
    return out + ".";
}

std::string print(const LogicProgram& p)
{
    std::string out;
    for (const auto& c : p.clauses)
        out += (out.empty() ? "" : "\n") + print(c);
    for (const auto& q : p.queries) {
        out += (out.empty() ? "?- " : "\n?- ");
        for (std::size_t i = 0; i < q.size(); ++i)
            out += (i ? ", " : "") + print(q[i]);
        out += ".";
    }
    return out;
}

std::string print(const ConstraintAst& ast)
{
    return std::visit([](const auto& v) { return print(v); }, ast);
}

void collect_variables(const Term& t, std::vector<std::string>& out)
{
    if (t.op == TermOp::Var) {
        if (std::find(out.begin(), out.end(), t.name) == out.end())
            out.push_back(t.name);
        return;
    }
    for (const auto& a : t.args)
        collect_variables(a, out);
}

std::vector<std::string> variables_of(const Term& t)
{
    std::vector<std::string> out;
    collect_variables(t, out);
    return out;
}

std::vector<std::string> variables_of(const ArithConj& c)
{
    std::vector<std::string> out;
    for (const auto& a : c.atoms) {
        collect_variables(a.lhs, out);
        collect_variables(a.rhs, out);
    }
    return out;
}

} // namespace tdt
