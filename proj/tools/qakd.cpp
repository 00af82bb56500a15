#include "commands.hpp"

int main(int argc, char** argv) { return qakd::cli::run_cli(argc, argv); }
