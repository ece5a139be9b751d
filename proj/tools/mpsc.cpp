#include <iostream>

#include "mps/cli.hpp"

int main(int argc, char** argv)
{
    return mps::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
