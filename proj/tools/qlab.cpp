#include <iostream>

#include "qlab/cli/app.hpp"

int main(int argc, char** argv) { return qlab::run_cli(argc, argv, std::cout, std::cerr); }
