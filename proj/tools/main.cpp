#include "cli.hpp"

int main(int argc, char** argv) { return ergokit::cli::run_main(argc, argv); }
