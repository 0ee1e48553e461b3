#include "cli.hpp"

int main(int argc, char** argv) { return rxplan::cli::run(argc, argv); }
