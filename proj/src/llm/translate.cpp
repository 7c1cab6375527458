#include "tdt/assist.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <regex>
#include <set>
#include <sstream>

namespace tdt::assist {

namespace {

constexpr std::array<std::string_view, 10> reserved_words{"Set",   "Elem", "Elems",  "in",   "notin",
                                                          "inter", "union", "diff", "subset", "empty"};

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

std::string replace_all(std::string s, const std::string& from, const std::string& to)
{
    for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size())
        s.replace(pos, from.size(), to);
    return s;
}

// A number directly followed by a unit symbol is never valid syntax, so the
// symbol can be dropped without changing any expression that parses.
std::string strip_units(const std::string& s)
{
    static const std::regex unit(R"((\d(?:\.\d+)?)\s*(?:m/s\^2|m/s²|m/s2|m/s|N/kg|kg|km|ms|m|s|N)(?![A-Za-z0-9_]))");
    return std::regex_replace(s, unit, "$1");
}

Comparison oriented(const Comparison& c)
{
    switch (c.op) {
    case CmpOp::Gt: return Comparison{c.rhs, CmpOp::Lt, c.lhs};
    case CmpOp::Ge: return Comparison{c.rhs, CmpOp::Le, c.lhs};
    case CmpOp::Eq:
        if (print(c.rhs) < print(c.lhs))
            return Comparison{c.rhs, CmpOp::Eq, c.lhs};
        return c;
    default: return c;
    }
}

} // namespace

std::string normalize_text(const std::string& raw, const std::map<std::string, std::string>& vmap,
                           std::vector<std::pair<std::string, std::string>>* renames,
                           std::vector<std::string>* unmapped)
{
    std::string s;
    for (char c : raw)
        if (c != '`' && c != '$')
            s += c;
    s = trim(s);
    s = replace_all(s, "==", "=");
    s = replace_all(s, "&&", ";");
    s = strip_units(s);

    std::set<std::string> canonical;
    for (const auto& [from, to] : vmap)
        canonical.insert(to);
    std::set<std::string> seen_renames, seen_unmapped;

    std::string out;
    for (std::size_t i = 0; i < s.size();) {
        char c = s[i];
        if (c == '\'' || c == '"') {
            auto close = s.find(c, i + 1);
            std::size_t end = close == std::string::npos ? s.size() : close + 1;
            out += s.substr(i, end - i);
            i = end;
            continue;
        }
        bool after_number = i > 0 && (std::isdigit(static_cast<unsigned char>(s[i - 1])) || s[i - 1] == '.');
        if (ident_start(c) && !after_number) {
            std::size_t j = i;
            while (j < s.size() && ident_char(s[j]))
                ++j;
            std::string word = s.substr(i, j - i);
            auto it = vmap.find(word);
            if (it != vmap.end()) {
                out += it->second;
                if (renames && seen_renames.insert(word).second)
                    renames->emplace_back(word, it->second);
            } else {
                out += word;
                bool keyword = std::find(reserved_words.begin(), reserved_words.end(), word) != reserved_words.end();
                if (unmapped && !keyword && !canonical.count(word) && seen_unmapped.insert(word).second)
                    unmapped->push_back(word);
            }
            i = j;
            continue;
        }
        out += c;
        ++i;
    }
    return trim(out);
}

std::string extract_expression(const std::string& reply)
{
    static const std::regex label(R"(^\s*translation\s*:\s*(.*)$)", std::regex::icase);
    std::istringstream in(reply);
    std::string line;
    std::optional<std::string> found;
    while (std::getline(in, line)) {
        std::smatch m;
        if (std::regex_match(line, m, label))
            found = trim(m[1].str());
    }
    return found ? *found : trim(reply);
}

TranslationResult normalize_translation(const std::string& raw, const std::map<std::string, std::string>& vmap,
                                        CType hint)
{
    TranslationResult r;
    r.raw = extract_expression(raw);
    std::string text = normalize_text(r.raw, vmap, &r.renames, &r.unmapped);
    if (text.empty()) {
        r.normalization_failed = true;
        r.error = "the answer contains no expression";
        return r;
    }
    try {
        r.ast = parse_constraint(text, hint);
        r.normalized = print(*r.ast);
    } catch (const Error& e) {
        r.ast.reset();
        r.normalization_failed = true;
        r.error = e.kind() + ": " + e.what();
    }
    return r;
}

ChatRequest translation_request(const std::string& nl, const std::vector<SubTranslation>& subs,
                                const TranslateOptions& opts)
{
    const PromptTemplate& tpl = opts.tpl ? *opts.tpl : PromptTemplate::builtin(PromptKind::Translate);
    ChatRequest req;
    req.model = opts.model;
    req.temperature = opts.temperature;
    req.messages.push_back(ChatMessage{"user", build_translation_prompt(nl, subs, tpl)});
    return req;
}

TranslationResult translate(const std::string& nl, const std::vector<SubTranslation>& subs, Provider& provider,
                            const std::map<std::string, std::string>& vmap, const TranslateOptions& opts)
{
    if (!(opts.temperature >= 0.0 && opts.temperature <= 2.0))
        throw Error("InvalidArgument", "temperature must lie in [0, 2]");
    auto reply = provider.complete(translation_request(nl, subs, opts));
    return normalize_translation(reply, vmap, opts.hint);
}

bool equivalent_constraints(const ConstraintAst& a, const ConstraintAst& b)
{
    const auto* x = std::get_if<ArithConj>(&a);
    const auto* y = std::get_if<ArithConj>(&b);
    if (!x || !y)
        return a == b;
    auto key = [](const ArithConj& c) {
        std::multiset<std::string> out;
        for (const auto& atom : c.atoms)
            out.insert(print(oriented(atom)));
        return out;
    };
    return key(*x) == key(*y);
}

} // namespace tdt::assist
