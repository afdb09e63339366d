#include <iostream>

#include "neuropt/cli/app.hpp"

int main(int argc, char** argv)
{
    return neuropt::cli::run_app({argv + 1, argv + argc}, std::cout, std::cerr);
}
