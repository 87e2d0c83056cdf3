#include <string>
#include <vector>

#include "ecstat/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ecstat::run_cli(args);
}
