#include <iostream>
#include <string>
#include <vector>

#include "orbit/cli.hpp"

int main(int argc, char** argv) {
    return orbit::run(std::vector<std::string>(argv, argv + argc), std::cout, std::cerr);
}
