#include "cansys/cli.hpp"

#include <iostream>

int main(int argc, char** argv) {
    return cansys::cli::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
