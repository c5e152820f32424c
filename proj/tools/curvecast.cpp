#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <unistd.h>

#include "curvecast/cli.hpp"

int main(int argc, char** argv) {
    const bool color = std::getenv("CURVECAST_NO_COLOR") == nullptr && isatty(STDOUT_FILENO);
    return curvecast::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr, color);
}
