#include "tdt/solver.hpp"

#include <set>
#include <sstream>

namespace tdt {

namespace {

std::string number(const Rational& r)
{
    auto magnitude = [](const Rational& a) {
        if (a.get_den() == 1)
            return a.get_num().get_str();
        return "(/ " + a.get_num().get_str() + " " + a.get_den().get_str() + ")";
    };
    if (r < 0)
        return "(- " + magnitude(Rational(-r)) + ")";
    return magnitude(r);
}

bool is_constant(const Term& t)
{
    if (t.op == TermOp::Num)
        return true;
    if (t.op == TermOp::Var)
        return false;
    for (const auto& a : t.args)
        if (!is_constant(a))
            return false;
    return true;
}

bool nonlinear(const Term& t)
{
    if (t.op == TermOp::Mul && !is_constant(t.args[0]) && !is_constant(t.args[1]))
        return true;
    if (t.op == TermOp::Div && !is_constant(t.args[1]))
        return true;
    for (const auto& a : t.args)
        if (nonlinear(a))
            return true;
    return false;
}

bool nonlinear(const ArithFormula& f)
{
    if (f.kind == ArithFormula::Kind::Atom)
        return nonlinear(f.atom.lhs) || nonlinear(f.atom.rhs);
    for (const auto& a : f.args)
        if (nonlinear(a))
            return true;
    return false;
}

std::string term(const Term& t)
{
    switch (t.op) {
    case TermOp::Num: return number(t.value);
    case TermOp::Var: return t.name;
    case TermOp::Neg: return "(- " + term(t.args[0]) + ")";
    case TermOp::Add: return "(+ " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    case TermOp::Sub: return "(- " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    case TermOp::Mul: return "(* " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    case TermOp::Div: return "(/ " + term(t.args[0]) + " " + term(t.args[1]) + ")";
    }
    return "";
}

std::string formula(const ArithFormula& f)
{
    switch (f.kind) {
    case ArithFormula::Kind::Atom: {
        const char* op = "=";
        switch (f.atom.op) {
        case CmpOp::Eq: op = "="; break;
        case CmpOp::Lt: op = "<"; break;
        case CmpOp::Le: op = "<="; break;
        case CmpOp::Gt: op = ">"; break;
        case CmpOp::Ge: op = ">="; break;
        }
        return std::string("(") + op + " " + term(f.atom.lhs) + " " + term(f.atom.rhs) + ")";
    }
    case ArithFormula::Kind::And:
    case ArithFormula::Kind::Or: {
        bool conj = f.kind == ArithFormula::Kind::And;
        if (f.args.empty())
            return conj ? "true" : "false";
        std::string out = conj ? "(and" : "(or";
        for (const auto& a : f.args)
            out += " " + formula(a);
        return out + ")";
    }
    }
    return "";
}

} // namespace

std::string export_smtlib(const ArithFormula& q)
{
    std::ostringstream os;
    os << "(set-logic " << (nonlinear(q) ? "QF_NRA" : "QF_LRA") << ")\n";
    auto vars = variables_of(q);
    std::set<std::string> sorted(vars.begin(), vars.end());
    for (const auto& v : sorted)
        os << "(declare-const " << v << " Real)\n";
    if (q.kind == ArithFormula::Kind::And) {
        for (const auto& a : q.args)
            os << "(assert " << formula(a) << ")\n";
    } else {
        os << "(assert " << formula(q) << ")\n";
    }
    os << "(check-sat)\n";
    if (!sorted.empty())
        os << "(get-model)\n";
    return os.str();
}

} // namespace tdt
