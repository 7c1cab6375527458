#include "tdt/assist.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <regex>
#include <set>
#include <sstream>

namespace tdt::assist {

namespace {

std::string trim(const std::string& s)
{
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos)
        return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s)
{
    for (auto& c : s)
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

[[noreturn]] void unparseable(std::size_t line_no, const std::string& line, const std::string& why)
{
    throw Error("UnparseableResponse",
                "line " + std::to_string(line_no) + " (" + why + "): " + (line.size() > 80 ? line.substr(0, 80) + "..." : line));
}

BuildingBlock block_from_name(const std::string& name, std::size_t line_no, const std::string& line)
{
    std::string n = lower(trim(name));
    for (std::size_t i = 0; i < std::size(building_block_names); ++i)
        if (n == lower(building_block_names[i]))
            return static_cast<BuildingBlock>(i);
    if (n == "calculation" || n == "proof")
        return BuildingBlock::CalculationOrProof;
    unparseable(line_no, line, "unknown building block '" + trim(name) + "'");
}

std::string unique_id(const std::string& wanted, std::set<std::string>& taken)
{
    std::string id = wanted;
    for (int k = 2; taken.count(id); ++k)
        id = wanted + "_" + std::to_string(k);
    taken.insert(id);
    return id;
}

} // namespace

std::string_view to_string(BuildingBlock b)
{
    return building_block_names[static_cast<std::size_t>(b)];
}

DecompositionResult parse_decomposition(const std::string& response)
{
    static const std::regex label(
        R"(^\s*(goal|building blocks?|strategy|sub-?goal\s*(\d+)|explanation|solution\s*(\d+))\s*:\s*(.*)$)",
        std::regex::icase);

    DecompositionResult r;
    std::map<std::size_t, std::size_t> subgoal_index; // number -> index
    std::vector<std::pair<std::size_t, std::size_t>> pending_solutions; // number, line
    // Fields are addressed by index: the vectors grow while parsing.
    std::function<std::string&()> current;
    bool blocks_seen = false;
    std::string blocks_line;
    std::size_t blocks_line_no = 0;

    std::istringstream in(response);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty())
            continue;
        std::smatch m;
        if (!std::regex_match(t, m, label)) {
            if (!current)
                unparseable(line_no, t, "text before the first label");
            std::string& f = current();
            f += (f.empty() ? "" : " ") + t;
            continue;
        }
        std::string key = lower(m[1].str());
        std::string value = trim(m[4].str());
        if (key == "goal") {
            current = [&r]() -> std::string& { return r.goal; };
            r.goal = value;
        } else if (key.rfind("building block", 0) == 0) {
            blocks_seen = true;
            blocks_line = value;
            blocks_line_no = line_no;
            current = [&blocks_line]() -> std::string& { return blocks_line; };
        } else if (key == "strategy") {
            r.strategy = value;
            current = [&r]() -> std::string& { return r.strategy; };
        } else if (key == "explanation") {
            if (r.subgoals.empty())
                unparseable(line_no, t, "explanation without a sub-goal");
            r.subgoals.back().explanation = value;
            current = [&r, i = r.subgoals.size() - 1]() -> std::string& { return r.subgoals[i].explanation; };
        } else if (m[2].matched) {
            std::size_t n = std::stoul(m[2].str());
            if (subgoal_index.count(n))
                unparseable(line_no, t, "sub-goal " + std::to_string(n) + " given twice");
            subgoal_index[n] = r.subgoals.size();
            r.subgoals.push_back(SubgoalItem{value, {}});
            current = [&r, i = r.subgoals.size() - 1]() -> std::string& { return r.subgoals[i].text; };
        } else {
            std::size_t n = std::stoul(m[3].str());
            pending_solutions.emplace_back(n, line_no);
            r.solutions.push_back(SolutionItem{0, value});
            current = [&r, i = r.solutions.size() - 1]() -> std::string& { return r.solutions[i].text; };
        }
    }

    if (r.subgoals.empty())
        throw Error("UnparseableResponse", "response contains no sub-goal");
    if (!blocks_seen || trim(blocks_line).empty())
        throw Error("UnparseableResponse", "response names no building block");
    std::string item;
    std::istringstream bl(blocks_line);
    while (std::getline(bl, item, ',')) {
        if (trim(item).empty())
            continue;
        auto b = block_from_name(item, blocks_line_no, blocks_line);
        if (std::find(r.building_blocks.begin(), r.building_blocks.end(), b) == r.building_blocks.end())
            r.building_blocks.push_back(b);
    }
    for (std::size_t i = 0; i < r.solutions.size(); ++i) {
        auto [n, ln] = pending_solutions[i];
        auto it = subgoal_index.find(n);
        if (it == subgoal_index.end())
            unparseable(ln, "Solution " + std::to_string(n), "no sub-goal with that number");
        r.solutions[i].subgoal = it->second;
    }
    for (const auto& s : r.subgoals)
        if (s.text.empty())
            throw Error("UnparseableResponse", "empty sub-goal text");
    return r;
}

ChatRequest decomposition_request(const std::string& goal, int layers, const DecomposeOptions& opts)
{
    const PromptTemplate& tpl = opts.tpl ? *opts.tpl : PromptTemplate::builtin(PromptKind::Decompose);
    ChatRequest req;
    req.model = opts.model;
    req.temperature = opts.temperature;
    req.messages.push_back(ChatMessage{"user", build_decomposition_prompt(goal, layers, tpl)});
    return req;
}

std::vector<TdtNode> decompose(const Project& p, const std::string& node_id, Provider& provider,
                               const DecomposeOptions& opts)
{
    if (!p.tree.contains(node_id))
        throw Error("UnknownNode", "no node with id '" + node_id + "'");
    const TdtNode& target = p.tree.at(node_id);
    if (target.kind != NodeKind::Goal)
        throw Error("InvalidArgument", "only goals can be decomposed; '" + node_id + "' is a solution");
    if (opts.layers < 1)
        throw Error("InvalidArgument", "layers must be at least 1");
    if (!(opts.temperature >= 0.0 && opts.temperature <= 2.0))
        throw Error("InvalidArgument", "temperature must lie in [0, 2]");

    std::set<std::string> taken;
    for (const auto& [id, n] : p.tree.nodes)
        taken.insert(id);

    std::vector<TdtNode> out{target};
    std::map<std::string, std::size_t> pos{{node_id, 0}};
    std::vector<std::string> frontier{node_id};

    for (int layer = 0; layer < opts.layers && !frontier.empty(); ++layer) {
        std::vector<std::string> next;
        for (const auto& gid : frontier) {
            const std::string goal_text = out[pos.at(gid)].description;
            auto reply = provider.complete(decomposition_request(goal_text, opts.layers, opts));
            auto d = parse_decomposition(reply);

            std::vector<std::string> sub_ids;
            for (std::size_t k = 0; k < d.subgoals.size(); ++k) {
                TdtNode g;
                g.id = unique_id(gid + "." + std::to_string(k + 1), taken);
                g.kind = NodeKind::Goal;
                g.description = d.subgoals[k].text;
                if (!d.subgoals[k].explanation.empty())
                    g.annotations.push_back(Annotation{AnnotationRole::Justification, d.subgoals[k].explanation, {}, {}});
                sub_ids.push_back(g.id);
                pos[g.id] = out.size();
                out.push_back(std::move(g));
            }
            std::vector<bool> has_solution(sub_ids.size(), false);
            std::vector<int> per_goal(sub_ids.size(), 0);
            for (const auto& s : d.solutions) {
                TdtNode sol;
                sol.id = unique_id(sub_ids[s.subgoal] + ".s" + std::to_string(++per_goal[s.subgoal]), taken);
                sol.kind = NodeKind::Solution;
                sol.description = s.text;
                out[pos.at(sub_ids[s.subgoal])].children.push_back(sol.id);
                has_solution[s.subgoal] = true;
                pos[sol.id] = out.size();
                out.push_back(std::move(sol));
            }

            TdtNode& parent = out[pos.at(gid)];
            parent.children.insert(parent.children.end(), sub_ids.begin(), sub_ids.end());
            if (!d.strategy.empty())
                parent.annotations.push_back(Annotation{AnnotationRole::Strategy, d.strategy, sub_ids, {}});
            std::string blocks;
            for (auto b : d.building_blocks)
                blocks += (blocks.empty() ? "" : ", ") + std::string(to_string(b));
            parent.annotations.push_back(Annotation{AnnotationRole::Justification, "Building blocks: " + blocks, {}, {}});

            for (std::size_t k = 0; k < sub_ids.size(); ++k)
                if (!has_solution[k])
                    next.push_back(sub_ids[k]);
        }
        frontier = std::move(next);
    }
    return out;
}

} // namespace tdt::assist
