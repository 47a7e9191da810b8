#include <string>
#include <vector>

#include "sltm/scenario.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return sltm::cli::cli_main(args);
}
