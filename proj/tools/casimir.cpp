#include "casimir/scenario.hpp"

int main(int argc, char** argv) { return casimir::cli::run_cli(argc, argv); }
