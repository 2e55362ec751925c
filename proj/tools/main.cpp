#include <iostream>

#include "qnn/harness.hpp"

int main(int argc, char **argv) { return qnn::run_cli(argc, argv, std::cout, std::cerr); }
