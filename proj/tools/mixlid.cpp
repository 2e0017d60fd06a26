#include "mixlid/cli.hpp"

int main(int argc, char** argv) { return mixlid::cli::run(argc, argv); }
