#include <iostream>
#include <string>
#include <vector>

#include "sperner/cli_io.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv, argv + argc);
    return sperner::run_cli(args, std::cout, std::cerr);
}
