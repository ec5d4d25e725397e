#include "radlab/cli.hpp"

int main(int argc, char** argv) { return radlab::cli::run(argc, argv); }
