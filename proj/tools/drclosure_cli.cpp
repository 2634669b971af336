#include "drclosure/cli.hpp"

int main(int argc, char** argv) { return drclosure::cli::run(argc, argv); }
