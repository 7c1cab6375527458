// Builds a replay fixture from a transcript of prompts and answers, so that
// recorded sessions can be edited by hand and re-keyed.
//
// Transcript: JSON array of
//   {"kind": "decompose", "goal": ..., "layers": N, "temperature": T?, "model": M?, "response": ...}
//   {"kind": "translate", "text": ..., "subs": [expr, ...]?, "temperature": T?, "model": M?, "response": ...}

#include "tdt/assist.hpp"
#include "tdt/project_io.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"Replay fixture generator"};
    std::string transcript, output;
    app.add_option("transcript", transcript, "Transcript JSON file")->required();
    app.add_option("-o,--output", output, "Fixture file to write")->required();
    CLI11_PARSE(app, argc, argv);

    using nlohmann::json;
    namespace ta = tdt::assist;
    try {
        json t = json::parse(tdt::read_file(transcript));
        std::vector<ta::FixtureEntry> entries;
        for (const auto& e : t) {
            std::string kind = e.at("kind").get<std::string>();
            ta::ChatRequest req;
            if (kind == "decompose") {
                ta::DecomposeOptions opts;
                opts.temperature = e.value("temperature", ta::decompose_temperature);
                opts.model = e.value("model", opts.model);
                req = ta::decomposition_request(e.at("goal").get<std::string>(), e.value("layers", 1), opts);
            } else if (kind == "translate") {
                ta::TranslateOptions opts;
                opts.temperature = e.value("temperature", ta::translate_temperature);
                opts.model = e.value("model", opts.model);
                std::vector<ta::SubTranslation> subs;
                for (const auto& s : e.value("subs", json::array()))
                    subs.push_back({{}, s.get<std::string>()});
                req = ta::translation_request(e.at("text").get<std::string>(), subs, opts);
            } else {
                throw tdt::Error("InvalidFixture", "unknown transcript kind '" + kind + "'");
            }
            entries.push_back({req.hash(), e.at("response").get<std::string>()});
        }
        ta::save_fixture(entries, output);
        std::cout << "wrote " << entries.size() << " entries to " << output << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}
