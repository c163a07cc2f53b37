#include <iostream>

#include "subjet_app/cli.hpp"

int main(int argc, char** argv) { return subjet::app::run_cli(argc, argv, std::cout, std::cerr); }
