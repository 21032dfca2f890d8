#include "leosched/harness/cli.hpp"

int main(int argc, char** argv) { return leosched::cli_main(argc, argv); }
