#include "cli/commands.hpp"

int main(int argc, char** argv) { return cd2::cli::run_cli(argc, argv); }
