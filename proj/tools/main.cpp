#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) { return pktilt::cli::run(argc, argv, std::cout, std::cerr); }
