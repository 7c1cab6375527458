#include "tdt/service.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    CLI::App app{"TDT project service"};
    std::string config_path, project_path, host, fixture;
    int port = -1;
    app.add_option("-c,--config", config_path, "JSON config file");
    app.add_option("-p,--project", project_path, "Project file (overrides the config)");
    app.add_option("--host", host, "Listen address");
    app.add_option("--port", port, "Listen port");
    app.add_option("--replay", fixture, "Replay fixture for assistance requests");
    CLI11_PARSE(app, argc, argv);

    try {
        tdt::ServiceConfig config = config_path.empty() ? tdt::ServiceConfig{} : tdt::load_config(config_path);
        if (!project_path.empty())
            config.project = project_path;
        if (!host.empty())
            config.host = host;
        if (port >= 0)
            config.port = port;
        if (!fixture.empty()) {
            config.provider.mode = tdt::assist::ProviderMode::Replay;
            config.provider.fixture = fixture;
        }
        tdt::serve(config);
    } catch (const tdt::Error& e) {
        std::cerr << "error: " << e.kind() << ": " << e.what() << "\n";
        return 3;
    }
    return 0;
}
