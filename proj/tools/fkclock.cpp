#include "fkclock/cli.hpp"

int main(int argc, char** argv) { return fkclock::cli::run(argc, argv); }
