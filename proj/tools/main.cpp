#include "cli.hpp"

int main(int argc, char** argv) { return ibm::cli::run(argc, argv); }
