#include <iostream>

#include "tqkd_cli/app.hpp"

int main(int argc, char** argv) { return tqkd::cli::run(argc, argv, std::cout, std::cerr); }
