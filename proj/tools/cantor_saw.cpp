#include "cantorsaw/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return cantorsaw::run_cli(argc, argv, std::cout, std::cerr);
}
