#include <iostream>

#include <prepot/cli.hpp>

int main(int argc, char** argv)
{
    return prepot::run_cli(argc, argv, std::cout, std::cerr);
}
