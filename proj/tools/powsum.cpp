#include "powsum/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return powsum::run_cli(argc, argv, std::cout, std::cerr); }
