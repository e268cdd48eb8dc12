#include "eegsz/commands.hpp"

int main(int argc, char** argv) { return eegsz::cli::run_cli(argc, argv); }
