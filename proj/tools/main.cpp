#include <iostream>
#include <string>
#include <vector>

#include "gsvd/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return gsvd::run_cli(args, std::cout, std::cerr);
}
