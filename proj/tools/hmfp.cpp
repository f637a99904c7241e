#include "hmfp/errors.hpp"
#include "hmfp/experiment.hpp"
#include "hmfp/kernels.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"HMF-Poisson ground states, evolution and orbital stability"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string input_path;
    std::string sweep;
    for (const char* name : {"steady", "evolve", "stability", "rearrange", "diag"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "flat key = value config file")->required();
        sub->add_option("--input", input_path, "input snapshot");
        sub->add_option("--sweep", sweep, "key=v1,v2,... runs one isolated job per value");
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }
    const std::string command = app.get_subcommands().front()->get_name();

    if (const char* t = std::getenv("HMFP_THREADS")) {
        const int n = std::atoi(t);
        if (n > 0) hmfp::kernels::set_threads(n);
    }

    std::optional<std::filesystem::path> input;
    if (!input_path.empty()) input = input_path;

    hmfp::Config config;
    try {
        config = hmfp::Config::load(config_path);
    } catch (const hmfp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    if (sweep.empty()) return hmfp::run_command(command, config, input, std::cout, std::cerr);

    std::pair<std::string, std::vector<std::string>> plan;
    try {
        plan = hmfp::parse_sweep(sweep);
    } catch (const hmfp::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    int worst = 0;
    for (const auto& value : plan.second) {
        hmfp::Config run = config;
        run.set(plan.first, value);
        std::ostringstream log, err;
        const int code = hmfp::run_command(command, run, input, log, err);
        std::cout << "[" << plan.first << " = " << value << "] exit " << code << '\n' << log.str();
        std::cerr << err.str();
        worst = std::max(worst, code);
    }
    return worst;
}
