#include <iostream>

#include "hdmt/cli.hpp"

int main(int argc, char** argv) {
    return hdmt::run_cli(argc, argv, std::cout, std::cerr);
}
