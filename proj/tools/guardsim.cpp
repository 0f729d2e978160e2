#include <string>
#include <vector>

#include "guard/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return guard::cli_main(std::move(args));
}
