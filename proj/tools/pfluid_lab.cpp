#include <iostream>

#include "pfluid/cli.hpp"

int main(int argc, char** argv) { return pfluid::run_cli(argc, argv, std::cout, std::cerr); }
