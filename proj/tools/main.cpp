#include "cli.hpp"

int main(int argc, char** argv) { return optdes::cli::run(argc, argv); }
