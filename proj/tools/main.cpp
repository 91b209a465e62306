#include "cli/commands.hpp"

int main(int argc, char** argv) { return leocdn::cli::run_main(argc, argv); }
