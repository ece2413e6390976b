#include "cli.hpp"

int main(int argc, char** argv) { return dca::cli::run(argc, argv); }
