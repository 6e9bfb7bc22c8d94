#include "cli.hpp"

int main(int argc, char** argv) { return zcjitter::cli::cli_main(argc, argv); }
