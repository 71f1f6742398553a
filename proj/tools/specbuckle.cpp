#include "specbuckle/cli.hpp"

int main(int argc, char** argv) { return specbuckle::cli::main(argc, argv); }
