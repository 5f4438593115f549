#include "ddcorr/cli.hpp"

#include <iostream>

int main(int argc, char** argv) { return ddcorr::cli::dispatch(argc, argv, std::cout, std::cerr); }
