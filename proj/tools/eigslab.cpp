#include <string>
#include <vector>

#include "eigslab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return eigslab::run_cli(args);
}
