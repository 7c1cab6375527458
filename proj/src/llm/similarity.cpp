#include "tdt/assist.hpp"

#include <cctype>
#include <set>

namespace tdt::assist {

namespace {

std::string stem(std::string w)
{
    if (w.size() > 4 && w.compare(w.size() - 3, 3, "ies") == 0)
        return w.substr(0, w.size() - 3) + "y";
    if (w.size() > 3 && w.back() == 's' && w[w.size() - 2] != 's')
        w.pop_back();
    return w;
}

} // namespace

std::vector<std::string> stem_tokens(const std::string& text)
{
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        if (!cur.empty())
            out.push_back(stem(cur));
        cur.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)))
            cur += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        else
            flush();
    }
    flush();
    return out;
}

double TokenSetF1::score(const std::string& a, const std::string& b) const
{
    auto ta = stem_tokens(a), tb = stem_tokens(b);
    std::set<std::string> sa(ta.begin(), ta.end()), sb(tb.begin(), tb.end());
    if (sa.empty() && sb.empty())
        return 1.0;
    if (sa.empty() || sb.empty())
        return 0.0;
    std::size_t common = 0;
    for (const auto& w : sa)
        common += sb.count(w);
    return 2.0 * static_cast<double>(common) / static_cast<double>(sa.size() + sb.size());
}

double similarity(const std::string& a, const std::string& b)
{
    return TokenSetF1{}.score(a, b);
}

} // namespace tdt::assist
