#include "chern/runner.hpp"

int main(int argc, char** argv) { return chern::cli_main(argc, argv); }
