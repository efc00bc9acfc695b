#include <iostream>

#include "interp_lab_cli/app.hpp"

int main(int argc, char** argv) { return interp_lab::cli::run(argc, argv, std::cout, std::cerr); }
