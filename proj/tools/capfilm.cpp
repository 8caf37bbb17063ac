#include "capfilm/cli.hpp"

int main(int argc, char** argv) { return capfilm::cli::run(argc, argv); }
