#include "roadplan/cli.hpp"

int main(int argc, char** argv) { return roadplan::cli_main(argc, argv); }
