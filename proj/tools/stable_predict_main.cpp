#include "stablepred/cli.hpp"

int main(int argc, char** argv) { return stablepred::cli_main(argc, argv); }
