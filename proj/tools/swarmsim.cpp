#include <iostream>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "swarm/cli/cli.hpp"

int main(int argc, char** argv) {
    // keep stdout for command output
    spdlog::set_default_logger(spdlog::stderr_color_mt("swarmsim"));
    return swarm::cli::run_cli({argv + 1, argv + argc}, std::cout, std::cerr);
}
