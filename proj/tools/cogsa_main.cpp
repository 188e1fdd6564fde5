#include "cogsa/cli.hpp"

int main(int argc, char** argv) { return cogsa::cli::run_main(argc, argv); }
