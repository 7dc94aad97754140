#include "cli.hpp"

int main(int argc, char** argv) { return episodes::cli::run(argc, argv); }
