#include "elicit/cli.hpp"

int main(int argc, char** argv) { return elicit::cli_main(argc, argv); }
