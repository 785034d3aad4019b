#include "efdyn/cli.hpp"

int main(int argc, char** argv) { return efdyn::cli_main(argc, argv); }
