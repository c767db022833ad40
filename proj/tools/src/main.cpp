#include "cli.hpp"

int main(int argc, char** argv) { return kdisc::cli::main_entry(argc, argv); }
