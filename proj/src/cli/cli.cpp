#include "tdt/cli.hpp"

#include "tdt/assist.hpp"
#include "tdt/evaluator.hpp"
#include "tdt/gsn.hpp"
#include "tdt/project_io.hpp"
#include "tdt/report.hpp"
#include "tdt/rules.hpp"
#include "tdt/service.hpp"
#include "tdt/solver.hpp"

#include <CLI11.hpp>

#include <sstream>

namespace tdt {

namespace {

using nlohmann::json;

struct ProviderFlags {
    std::string replay;
    std::string record;
    bool live = false;
    std::string endpoint;
    std::string model = "gpt-3.5-turbo";
    std::string api_key_env = "TDT_API_KEY";

    void add_to(CLI::App* sub)
    {
        sub->add_option("--replay", replay, "Answer from a recorded fixture file");
        sub->add_option("--record", record, "Call the live provider and append answers to this fixture");
        sub->add_flag("--live", live, "Call the live provider");
        sub->add_option("--endpoint", endpoint, "Chat-completion endpoint URL");
        sub->add_option("--model", model, "Model name sent to the provider");
        sub->add_option("--api-key-env", api_key_env, "Environment variable holding the API key");
    }

    std::unique_ptr<assist::Provider> make(const std::optional<ServiceConfig>& config) const
    {
        assist::ProviderConfig cfg;
        if (config && replay.empty() && record.empty() && !live)
            return assist::make_provider(config->provider);
        if (!endpoint.empty())
            cfg.endpoint = endpoint;
        cfg.model = model;
        cfg.api_key_env = api_key_env;
        if (!replay.empty()) {
            cfg.mode = assist::ProviderMode::Replay;
            cfg.fixture = replay;
        } else if (!record.empty()) {
            cfg.mode = assist::ProviderMode::Record;
            cfg.fixture = record;
        } else if (live) {
            cfg.mode = assist::ProviderMode::Live;
        } else {
            throw Error("InvalidArgument", "choose a provider with --replay, --record or --live");
        }
        return assist::make_provider(cfg);
    }
};

SolverBudget parse_budget(const std::string& spec, const std::optional<ServiceConfig>& config)
{
    SolverBudget b = config ? config->budget : SolverBudget{};
    std::istringstream in(spec);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string::npos)
            throw Error("InvalidArgument", "budget entries look like key=value, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::uint64_t value = 0;
        try {
            value = std::stoull(item.substr(eq + 1));
        } catch (const std::exception&) {
            throw Error("InvalidArgument", "budget value for '" + key + "' is not a number");
        }
        if (key == "max_steps" || key == "steps")
            b.max_steps = value;
        else if (key == "max_boxes" || key == "boxes")
            b.max_boxes = value;
        else if (key == "max_universe" || key == "universe")
            b.max_universe = static_cast<unsigned>(value);
        else if (key == "wall_ms" || key == "ms")
            b.wall_ms = value;
        else
            throw Error("InvalidArgument", "unknown budget key '" + key + "'");
    }
    return b;
}

void emit(std::ostream& out, const std::string& text, const std::string& path)
{
    if (path.empty())
        out << text;
    else
        write_file_atomic(path, text);
}

int exit_code_for(const EvaluationReport& r)
{
    if (r.counts.at("Unsound") > 0)
        return exit_unsound;
    if (r.counts.at("Unknown") > 0 || r.counts.at("IllFormed") > 0)
        return exit_unknown;
    return exit_ok;
}

void print_check_summary(std::ostream& out, const Project& p, const EvaluationReport& r)
{
    out << "Families checked: " << r.checked_families() << "\n";
    out << "Sound: " << r.counts.at("Sound") << "  Unsound: " << r.counts.at("Unsound")
        << "  Unknown: " << r.counts.at("Unknown") << "  NotEvaluated: " << r.counts.at("NotEvaluated")
        << "  IllFormed: " << r.counts.at("IllFormed") << "\n";
    bool clean = r.counts.at("Unsound") == 0 && r.counts.at("Unknown") == 0 && r.counts.at("IllFormed") == 0;
    if (clean) {
        out << "Sound: all checkable families\n";
        return;
    }
    for (const auto& k : r.risks) {
        if (k.status == Status::NotEvaluated)
            continue;
        out << to_string(k.status) << ": node " << k.node_id;
        if (p.tree.contains(k.node_id))
            out << " (" << to_string(colour_of(p.tree.at(k.node_id), &r)) << ")";
        out << "\n";
        if (!k.obligation.empty())
            out << "  obligation: " << k.obligation << "\n";
        out << "  " << k.explanation << "\n";
        if (k.verdict && k.verdict->outcome == Outcome::Sat)
            for (const auto& b : k.verdict->model)
                out << "  " << b.name << " = " << b.value.display() << "\n";
    }
    for (const auto& t : r.tainted)
        out << "Tainted: node " << t << " (yellow)\n";
}

void merge_nodes(Project& p, const std::vector<TdtNode>& nodes)
{
    for (const auto& n : nodes)
        p.tree.nodes[n.id] = n;
    auto violations = validate(p);
    if (!is_valid(violations))
        throw ValidationFailed(std::move(violations));
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Trustworthiness derivation tree toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json_errors = false;
    app.add_flag("--json", json_errors, "Machine-readable output and errors");
    std::string config_path;
    app.add_option("-c,--config", config_path, "Service config file (budgets, provider settings)");

    auto* skeleton = app.add_subcommand("skeleton", "Build a project skeleton from rule text");
    std::string rules_path, out_path;
    skeleton->add_option("rules", rules_path, "Rule text file")->required();
    skeleton->add_option("-o,--output", out_path, "Output project file (default: stdout)");

    auto* convert = app.add_subcommand("convert", "Convert between GSN and TDT documents");
    std::string convert_in, convert_to;
    convert->add_option("input", convert_in, "Input document")->required();
    convert->add_option("--to", convert_to, "Target format")->required()->check(CLI::IsMember({"gsn", "tdt"}));
    convert->add_option("-o,--output", out_path, "Output file (default: stdout)");

    auto* check = app.add_subcommand("check", "Evaluate every family and summarize");
    std::string project_path, budget_spec;
    unsigned parallelism = 0;
    check->add_option("project", project_path, "Project file")->required();
    check->add_option("--budget", budget_spec, "Solver budget, e.g. max_steps=10000,max_boxes=100000,wall_ms=10000");
    check->add_option("-j,--jobs", parallelism, "Worker threads (0: hardware concurrency)");

    auto* report = app.add_subcommand("report", "Render an evaluation report");
    std::string format = "markdown";
    report->add_option("project", project_path, "Project file")->required();
    report->add_option("--format", format, "json | markdown | md");
    report->add_option("--budget", budget_spec, "Solver budget");
    report->add_option("-o,--output", out_path, "Output file (default: stdout)");

    auto* decompose = app.add_subcommand("decompose", "Ask the language model to decompose a goal");
    std::string node_id;
    int layers = 1;
    double temperature = -1;
    ProviderFlags provider_flags;
    decompose->add_option("project", project_path, "Project file")->required();
    decompose->add_option("--node", node_id, "Goal to decompose")->required();
    decompose->add_option("--layers", layers, "Number of layers")->check(CLI::PositiveNumber);
    decompose->add_option("--temperature", temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
    decompose->add_option("-o,--output", out_path, "Write the extended project here");
    provider_flags.add_to(decompose);

    auto* translate = app.add_subcommand("translate", "Translate a requirement into a constraint expression");
    std::string text;
    std::vector<std::string> subs;
    bool apply = false;
    translate->add_option("project", project_path, "Project file")->required();
    translate->add_option("--node", node_id, "Node whose requirement is translated")->required();
    translate->add_option("--text", text, "Requirement text (default: the node description)");
    translate->add_option("--sub", subs, "Sub-translation cue (default: the children's expressions)");
    translate->add_option("--temperature", temperature, "Sampling temperature")->check(CLI::Range(0.0, 2.0));
    translate->add_flag("--apply", apply, "Store the normalized expression on the node");
    translate->add_option("-o,--output", out_path, "Where --apply writes the project (default: in place)");
    provider_flags.add_to(translate);

    auto* export_cmd = app.add_subcommand("export", "Export a Graphviz view or an SMT-LIB obligation");
    bool dot = false, smtlib = false;
    export_cmd->add_option("project", project_path, "Project file")->required();
    export_cmd->add_flag("--dot", dot, "Graphviz DOT of the whole tree, coloured by evaluation");
    export_cmd->add_flag("--smtlib", smtlib, "SMT-LIB 2 script of one arithmetic family");
    export_cmd->add_option("--node", node_id, "Family for --smtlib");
    export_cmd->add_option("--budget", budget_spec, "Solver budget used for --dot colouring");
    export_cmd->add_option("-o,--output", out_path, "Output file (default: stdout)");

    std::vector<std::string> argv_store{"tdt"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : argv_store)
        argv.push_back(a.data());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e, out, err);
        if (json_errors) {
            err << json{{"error", "UsageError"}, {"message", e.what()}}.dump() << "\n";
            return exit_error;
        }
        app.exit(e, out, err);
        return exit_error;
    }

    try {
        std::optional<ServiceConfig> config;
        if (!config_path.empty())
            config = load_config(config_path);
        if (skeleton->parsed()) {
            Project p = skeleton_from_rules(parse_rule_text(read_file(rules_path)));
            emit(out, serialize_project(p), out_path);
            return exit_ok;
        }
        if (convert->parsed()) {
            json in = json::parse(read_file(convert_in));
            std::string result;
            if (convert_to == "gsn") {
                Project p = project_from_json(in);
                auto violations = validate(p);
                if (!is_valid(violations))
                    throw ValidationFailed(std::move(violations));
                result = to_json(tdt_to_gsn(p)).dump(2) + "\n";
            } else {
                result = serialize_project(gsn_to_tdt(gsn_from_json(in)));
            }
            emit(out, result, out_path);
            return exit_ok;
        }
        if (check->parsed()) {
            Project p = load_project(project_path);
            EvaluationOptions opts;
            opts.budget = parse_budget(budget_spec, config);
            opts.parallelism = parallelism ? parallelism : (config ? config->parallelism : 0);
            auto r = evaluate_tree(p, opts);
            if (json_errors)
                out << report_to_json(r).dump(2) << "\n";
            else
                print_check_summary(out, p, r);
            return exit_code_for(r);
        }
        if (report->parsed()) {
            auto fmt = report_format_from_string(format);
            Project p = load_project(project_path);
            EvaluationOptions opts;
            opts.budget = parse_budget(budget_spec, config);
            auto r = evaluate_tree(p, opts);
            emit(out, render_report(r, fmt), out_path);
            return exit_ok;
        }
        if (decompose->parsed()) {
            Project p = load_project(project_path);
            auto provider = provider_flags.make(config);
            assist::DecomposeOptions opts;
            opts.layers = layers;
            opts.model = provider_flags.model;
            if (temperature >= 0)
                opts.temperature = temperature;
            auto nodes = assist::decompose(p, node_id, *provider, opts);
            merge_nodes(p, nodes);
            if (!out_path.empty())
                save_project(p, out_path);
            if (json_errors) {
                json arr = json::array();
                for (const auto& n : nodes)
                    arr.push_back(node_to_json(n));
                out << json{{"node_id", node_id}, {"nodes", arr}}.dump(2) << "\n";
            } else {
                std::size_t goals = 0, solutions = 0;
                for (std::size_t i = 1; i < nodes.size(); ++i)
                    (nodes[i].kind == NodeKind::Goal ? goals : solutions)++;
                out << "Decomposed " << node_id << " into " << goals << " goals and " << solutions
                    << " solutions\n";
                for (std::size_t i = 1; i < nodes.size(); ++i)
                    out << "  " << nodes[i].id << " [" << to_string(nodes[i].kind) << "] " << nodes[i].description
                        << "\n";
            }
            return exit_ok;
        }
        if (translate->parsed()) {
            Project p = load_project(project_path);
            const TdtNode& node = p.tree.at(node_id);
            std::vector<assist::SubTranslation> cues;
            if (translate->count("--sub")) {
                for (const auto& s : subs)
                    cues.push_back({{}, s});
            } else {
                for (const auto& c : node.children)
                    if (p.tree.at(c).expr)
                        cues.push_back({p.tree.at(c).description, *p.tree.at(c).expr});
            }
            auto provider = provider_flags.make(config);
            assist::TranslateOptions opts;
            opts.model = provider_flags.model;
            opts.hint = node.ctype;
            if (temperature >= 0)
                opts.temperature = temperature;
            auto r = assist::translate(translate->count("--text") ? text : node.description, cues, *provider,
                                       p.variable_map, opts);
            if (json_errors) {
                json renames = json::array();
                for (const auto& [from, to] : r.renames)
                    renames.push_back(json{{"from", from}, {"to", to}});
                out << json{{"node_id", node_id},         {"raw", r.raw},
                            {"normalized", r.normalized}, {"normalization_failed", r.normalization_failed},
                            {"error", r.error},           {"renames", renames},
                            {"unmapped", r.unmapped}}
                           .dump(2)
                    << "\n";
            } else {
                out << "raw: " << r.raw << "\n";
                if (r.normalization_failed)
                    out << "NormalizationFailed: " << r.error << "\n";
                else
                    out << "normalized: " << r.normalized << "\n";
            }
            if (r.normalization_failed)
                return exit_unsound;
            if (apply) {
                TdtNode& target = p.tree.at(node_id);
                target.expr = r.normalized;
                target.ctype = classify(*r.ast);
                save_project(p, out_path.empty() ? project_path : out_path);
            }
            return exit_ok;
        }
        if (export_cmd->parsed()) {
            if (dot == smtlib)
                throw Error("InvalidArgument", "choose exactly one of --dot and --smtlib");
            Project p = load_project(project_path);
            if (dot) {
                EvaluationOptions opts;
                opts.budget = parse_budget(budget_spec, config);
                auto r = evaluate_tree(p, opts);
                emit(out, export_dot(p, &r), out_path);
                return exit_ok;
            }
            if (node_id.empty())
                throw Error("InvalidArgument", "--smtlib needs --node");
            auto q = build_query(build_obligation(p, node_id));
            const auto* f = std::get_if<ArithFormula>(&q);
            if (!f)
                throw Error("InvalidArgument", "SMT-LIB export needs an arithmetic family; '" + node_id + "' is not");
            emit(out, export_smtlib(*f), out_path);
            return exit_ok;
        }
    } catch (const std::exception& e) {
        std::string kind = "Error";
        if (const auto* te = dynamic_cast<const Error*>(&e))
            kind = te->kind();
        else if (dynamic_cast<const json::exception*>(&e))
            kind = "InvalidJson";
        if (json_errors) {
            json body{{"error", kind}, {"message", e.what()}};
            if (const auto* v = dynamic_cast<const ValidationFailed*>(&e)) {
                json list = json::array();
                for (const auto& x : v->violations())
                    list.push_back(x.to_string());
                body["violations"] = list;
            }
            err << body.dump() << "\n";
        } else {
            err << "error: " << kind << ": " << e.what() << "\n";
        }
        return exit_error;
    }
    return exit_error;
}

} // namespace tdt
