#include <iostream>

#include "emr/cli.hpp"

int main(int argc, char** argv) { return emr::run_cli(argc, argv, std::cout, std::cerr); }
