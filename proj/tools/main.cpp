#include <iostream>

#include "smoothavg/cli.hpp"

int main(int argc, char** argv) { return smoothavg::run_cli(argc, argv, std::cout, std::cerr); }
