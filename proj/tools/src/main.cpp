#include "tzitzeica_cli/commands.hpp"

#include <iostream>

int main(int argc, char** argv) {
    const std::vector<std::string> args(argv + 1, argv + argc);
    const auto res = tzitzeica::cli::run(args);
    std::cout << res.stdout_text;
    std::cerr << res.stderr_text;
    return res.exit_code;
}
