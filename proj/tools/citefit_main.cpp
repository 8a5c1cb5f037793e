#include "citefit/cli.hpp"

int main(int argc, char** argv) { return citefit::cli::run(argc, argv); }
