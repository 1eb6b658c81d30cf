#include "gprtfa/cli.hpp"

int main(int argc, char** argv) { return gprtfa::cli::main(argc, argv); }
