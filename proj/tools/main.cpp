#include "cli.hpp"

int main(int argc, char** argv) { return aqo::cli::run(argc, argv); }
