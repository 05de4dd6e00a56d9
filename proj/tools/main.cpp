#include "monogamy/cli.hpp"

int main(int argc, char** argv) { return monogamy::cli::run(argc, argv); }
