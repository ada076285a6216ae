#include "dephasim/io.hpp"

int main(int argc, char** argv) { return dephasim::run_cli(argc, argv); }
