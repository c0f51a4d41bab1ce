#include "rsdlab/cli.hpp"

int main(int argc, char** argv) { return rsdlab::run_cli(argc, argv); }
