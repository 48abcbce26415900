#include "cli.hpp"

int main(int argc, char** argv) { return covbounds::cli::main_entry(argc, argv); }
