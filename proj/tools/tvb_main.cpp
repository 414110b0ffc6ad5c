#include <iostream>

#include "tvb/cli/app.hpp"

int main(int argc, char** argv) { return tvb::cli::run(argc, argv, std::cout, std::cerr); }
