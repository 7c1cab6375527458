#include "tdt/assist.hpp"

#include "tdt/project_io.hpp"

#include <algorithm>
#include <sstream>

namespace tdt::assist {

namespace detail {
extern const char* const decompose_template_text;
extern const char* const translate_template_text;
}

namespace {

constexpr std::string_view segment_marker = "### segment:";

std::string trim(std::string_view s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::string strip_trailing_blank_lines(std::string s)
{
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' '))
        s.pop_back();
    return s;
}

// A line holding nothing but a placeholder whose value is empty is dropped.
std::string render_text(const std::string& text, const std::map<std::string, std::string>& values)
{
    std::string out;
    std::istringstream in(text);
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::string t = trim(line);
        if (t.size() > 4 && t.rfind("{{", 0) == 0 && t.substr(t.size() - 2) == "}}" &&
            t.find("{{", 2) == std::string::npos) {
            auto it = values.find(t.substr(2, t.size() - 4));
            if (it != values.end() && it->second.empty())
                continue;
        }
        std::string r;
        std::size_t pos = 0;
        while (true) {
            auto open = line.find("{{", pos);
            if (open == std::string::npos) {
                r += line.substr(pos);
                break;
            }
            auto close = line.find("}}", open + 2);
            if (close == std::string::npos) {
                r += line.substr(pos);
                break;
            }
            r += line.substr(pos, open - pos);
            auto it = values.find(line.substr(open + 2, close - open - 2));
            r += it != values.end() ? it->second : line.substr(open, close + 2 - open);
            pos = close + 2;
        }
        out += (first ? "" : "\n") + r;
        first = false;
    }
    return out;
}

void require_placeholder(const PromptTemplate& tpl, std::string_view name)
{
    if (!tpl.has_placeholder(name))
        throw Error("MissingPlaceholder", "prompt template has no {{" + std::string(name) + "}} placeholder");
}

std::string joined(const PromptTemplate& tpl)
{
    std::string all;
    for (const auto& s : tpl.segments)
        all += s.text + "\n";
    return all;
}

} // namespace

PromptTemplate PromptTemplate::parse(std::string_view text, PromptKind kind)
{
    PromptTemplate tpl;
    tpl.kind = kind;
    std::istringstream in{std::string(text)};
    std::string line;
    std::string body;
    std::optional<std::string> name;
    auto flush = [&] {
        if (name)
            tpl.segments.push_back(PromptSegment{*name, strip_trailing_blank_lines(body)});
        else if (!trim(body).empty())
            tpl.segments.push_back(PromptSegment{"main", strip_trailing_blank_lines(body)});
        body.clear();
    };
    while (std::getline(in, line)) {
        if (line.rfind(segment_marker, 0) == 0) {
            flush();
            name = trim(std::string_view(line).substr(segment_marker.size()));
            continue;
        }
        body += line + "\n";
    }
    flush();
    if (tpl.segments.empty())
        throw Error("InvalidTemplate", "prompt template is empty");
    return tpl;
}

PromptTemplate PromptTemplate::load(const std::filesystem::path& path, PromptKind kind)
{
    return parse(read_file(path), kind);
}

const PromptTemplate& PromptTemplate::builtin(PromptKind kind)
{
    static const PromptTemplate decompose = parse(detail::decompose_template_text, PromptKind::Decompose);
    static const PromptTemplate translate = parse(detail::translate_template_text, PromptKind::Translate);
    return kind == PromptKind::Decompose ? decompose : translate;
}

bool PromptTemplate::has_placeholder(std::string_view name) const
{
    std::string needle = "{{" + std::string(name) + "}}";
    return std::any_of(segments.begin(), segments.end(),
                       [&](const PromptSegment& s) { return s.text.find(needle) != std::string::npos; });
}

std::string PromptTemplate::render(const std::map<std::string, std::string>& values) const
{
    std::string out;
    for (std::size_t i = 0; i < segments.size(); ++i)
        out += (i ? "\n\n" : "") + render_text(segments[i].text, values);
    return out;
}

std::string build_decomposition_prompt(const std::string& goal, int layers, const PromptTemplate& tpl,
                                       const std::string& examples)
{
    if (trim(goal).empty())
        throw Error("InvalidArgument", "goal text is empty");
    if (layers < 1)
        throw Error("InvalidArgument", "layers must be at least 1");
    require_placeholder(tpl, "goal");
    std::string all = joined(tpl);
    for (const char* block : building_block_names)
        if (all.find(block) == std::string::npos)
            throw Error("InvalidTemplate", std::string("decomposition template does not define '") + block + "'");
    return tpl.render({{"goal", trim(goal)}, {"layers", std::to_string(layers)}, {"examples", examples}});
}

std::string build_translation_prompt(const std::string& nl, const std::vector<SubTranslation>& subs,
                                     const PromptTemplate& tpl, const std::string& examples)
{
    if (trim(nl).empty())
        throw Error("InvalidArgument", "requirement text is empty");
    require_placeholder(tpl, "nl_text");
    if (joined(tpl).find(units_rule) == std::string::npos)
        throw Error("InvalidTemplate", "translation template lacks the SI units instruction");
    std::string cues;
    for (const auto& s : subs) {
        if (trim(s.expr).empty())
            continue;
        cues += (cues.empty() ? "" : " | ") + trim(s.expr);
    }
    if (cues.empty())
        cues = "none";
    return tpl.render({{"nl_text", trim(nl)}, {"sub_translations", cues}, {"examples", examples}});
}

} // namespace tdt::assist
