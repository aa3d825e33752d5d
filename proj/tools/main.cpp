#include <iostream>

#include "monwalk_app/cli.hpp"

int main(int argc, char** argv) { return monwalk::app::run_cli(argc, argv, std::cout, std::cerr); }
