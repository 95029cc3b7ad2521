#include "mapd/cli.hpp"

int main(int argc, char** argv) { return mapd::cli::run_cli(argc, argv); }
