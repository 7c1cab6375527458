#pragma once

// Language-model assistance: goal decomposition and natural-language to
// constraint translation, with record/replay providers.

#include "tdt/ast.hpp"
#include "tdt/error.hpp"
#include "tdt/model.hpp"

#include <nlohmann/json.hpp>

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

namespace tdt::assist {

// ----------------------------------------------------------------- templates

enum class PromptKind { Decompose, Translate };

struct PromptSegment {
    std::string name;
    std::string text;

    bool operator==(const PromptSegment&) const = default;
};

/// Ordered text blocks with {{placeholder}} slots. Source files separate
/// blocks with "### segment: <name>" lines.
struct PromptTemplate {
    PromptKind kind = PromptKind::Decompose;
    std::vector<PromptSegment> segments;

    static PromptTemplate parse(std::string_view text, PromptKind kind);
    static PromptTemplate load(const std::filesystem::path& path, PromptKind kind);
    /// The templates shipped with the library.
    static const PromptTemplate& builtin(PromptKind kind);

    bool has_placeholder(std::string_view name) const;
    /// Substitutes every {{name}}; unknown placeholders are left in place.
    std::string render(const std::map<std::string, std::string>& values) const;
};

inline constexpr const char* building_block_names[] = {"Decomposition", "Substitution", "Concretion",
                                                        "Calculation or Proof", "Evidence Incorporation"};
inline constexpr const char* units_rule =
    "Express every quantity in international (SI) units and write numbers without unit symbols.";

/// Throws Error("MissingPlaceholder") when {{goal}} is absent and
/// Error("InvalidArgument") for an empty goal or layers < 1.
std::string build_decomposition_prompt(const std::string& goal, int layers, const PromptTemplate& tpl,
                                       const std::string& examples = {});

/// A sub-translation cue: the text of a child node and its expression.
struct SubTranslation {
    std::string text;
    std::string expr;
};

std::string build_translation_prompt(const std::string& nl, const std::vector<SubTranslation>& subs,
                                     const PromptTemplate& tpl, const std::string& examples = {});

// ----------------------------------------------------------------- providers

struct ChatMessage {
    std::string role;
    std::string content;
};

struct ChatRequest {
    std::string model;
    double temperature = 0.8;
    std::vector<ChatMessage> messages;

    nlohmann::json to_json() const;
    /// SHA-256 (hex) of the compact JSON encoding; the replay key.
    std::string hash() const;
};

class ProviderError : public Error {
public:
    ProviderError(int status, std::string body);

    int status() const noexcept { return status_; }
    const std::string& body() const noexcept { return body_; }

private:
    int status_;
    std::string body_;
};

class Provider {
public:
    virtual ~Provider() = default;
    /// Returns the assistant's reply text; throws ProviderError.
    virtual std::string complete(const ChatRequest& request) = 0;
};

enum class ProviderMode { Live, Replay, Record };

ProviderMode provider_mode_from_string(std::string_view s);
std::string_view to_string(ProviderMode m);

struct ProviderConfig {
    std::string endpoint = "https://api.openai.com/v1/chat/completions";
    std::string model = "gpt-3.5-turbo";
    ProviderMode mode = ProviderMode::Replay;
    std::filesystem::path fixture;
    std::string api_key_env = "TDT_API_KEY";
    int timeout_s = 60;

    /// Throws Error("InvalidConfig") when a replay or record fixture is missing.
    void validate() const;
};

struct FixtureEntry {
    std::string request_hash;
    std::string response_text;

    bool operator==(const FixtureEntry&) const = default;
};

std::vector<FixtureEntry> load_fixture(const std::filesystem::path& path);
void save_fixture(const std::vector<FixtureEntry>& entries, const std::filesystem::path& path);

/// Answers from recorded responses; an unrecorded request is a 404 ProviderError.
class ReplayProvider : public Provider {
public:
    explicit ReplayProvider(const std::vector<FixtureEntry>& entries);
    explicit ReplayProvider(const std::filesystem::path& fixture);

    std::string complete(const ChatRequest& request) override;

private:
    std::map<std::string, std::string> responses_;
};

/// Forwards to another provider and appends each exchange to a fixture file.
class RecordProvider : public Provider {
public:
    RecordProvider(std::unique_ptr<Provider> inner, std::filesystem::path fixture);

    std::string complete(const ChatRequest& request) override;

private:
    std::unique_ptr<Provider> inner_;
    std::filesystem::path fixture_;
    std::mutex mutex_;
};

/// OpenAI-style chat completion endpoint over HTTP(S).
class LiveProvider : public Provider {
public:
    explicit LiveProvider(ProviderConfig config);

    std::string complete(const ChatRequest& request) override;

private:
    ProviderConfig config_;
};

/// Answers through a callback; used by tests and tools.
class ScriptedProvider : public Provider {
public:
    explicit ScriptedProvider(std::function<std::string(const ChatRequest&)> fn) : fn_(std::move(fn)) {}

    std::string complete(const ChatRequest& request) override { return fn_(request); }

private:
    std::function<std::string(const ChatRequest&)> fn_;
};

std::unique_ptr<Provider> make_provider(const ProviderConfig& config);

// ------------------------------------------------------------- decomposition

enum class BuildingBlock { Decomposition, Substitution, Concretion, CalculationOrProof, EvidenceIncorporation };

std::string_view to_string(BuildingBlock b);

struct SubgoalItem {
    std::string text;
    std::string explanation;
};

struct SolutionItem {
    std::size_t subgoal = 0; // index into subgoals
    std::string text;
};

struct DecompositionResult {
    std::string goal;
    std::string strategy;
    std::vector<SubgoalItem> subgoals;
    std::vector<SolutionItem> solutions;
    std::vector<BuildingBlock> building_blocks;
};

/// Parses the labeled-line response format. Throws
/// Error("UnparseableResponse") naming the first offending line.
DecompositionResult parse_decomposition(const std::string& response);

inline constexpr double decompose_temperature = 0.8;
inline constexpr double translate_temperature = 0.2;

struct DecomposeOptions {
    int layers = 1;
    double temperature = decompose_temperature;
    std::string model = "gpt-3.5-turbo";
    const PromptTemplate* tpl = nullptr; // builtin when null
};

/// Decomposes `node_id` breadth-first, one request per goal per layer. Goals
/// that received a solution are not decomposed further. Returns every node
/// that must be written back: the target, new goals and new solutions. The
/// project is not modified.
std::vector<TdtNode> decompose(const Project& p, const std::string& node_id, Provider& provider,
                               const DecomposeOptions& opts = {});

// --------------------------------------------------------------- translation

struct TranslationResult {
    /// The expression as the model wrote it.
    std::string raw;
    std::optional<ConstraintAst> ast;
    /// Canonical text of `ast`; empty when normalization failed.
    std::string normalized;
    std::vector<std::pair<std::string, std::string>> renames;
    /// Identifiers with no entry in the variable map.
    std::vector<std::string> unmapped;
    bool normalization_failed = false;
    std::string error;
};

/// '==' to '=', unit symbols after numbers removed, variable map applied.
/// Returns the rewritten text; also reports renames and unmapped names.
std::string normalize_text(const std::string& raw, const std::map<std::string, std::string>& vmap,
                           std::vector<std::pair<std::string, std::string>>* renames = nullptr,
                           std::vector<std::string>* unmapped = nullptr);

/// Full pipeline on a raw model answer (no provider call).
TranslationResult normalize_translation(const std::string& raw, const std::map<std::string, std::string>& vmap,
                                        CType hint = CType::None);

/// Extracts the expression from a reply ("Translation: ..." or the bare text).
std::string extract_expression(const std::string& reply);

struct TranslateOptions {
    double temperature = translate_temperature;
    std::string model = "gpt-3.5-turbo";
    const PromptTemplate* tpl = nullptr;
    CType hint = CType::None;
};

TranslationResult translate(const std::string& nl, const std::vector<SubTranslation>& subs, Provider& provider,
                            const std::map<std::string, std::string>& vmap, const TranslateOptions& opts = {});

/// Chat request for a translation; exposed so fixtures can be keyed.
ChatRequest translation_request(const std::string& nl, const std::vector<SubTranslation>& subs,
                                const TranslateOptions& opts = {});
ChatRequest decomposition_request(const std::string& goal, int layers, const DecomposeOptions& opts = {});

/// Structural equality of constraints, treating a > b as b < a and a >= b as b <= a.
bool equivalent_constraints(const ConstraintAst& a, const ConstraintAst& b);

// ---------------------------------------------------------------- similarity

class SimilarityScorer {
public:
    virtual ~SimilarityScorer() = default;
    virtual double score(const std::string& a, const std::string& b) const = 0;
};

/// F1 over the sets of lower-cased, lightly stemmed word tokens.
class TokenSetF1 : public SimilarityScorer {
public:
    double score(const std::string& a, const std::string& b) const override;
};

std::vector<std::string> stem_tokens(const std::string& text);
double similarity(const std::string& a, const std::string& b);

} // namespace tdt::assist
