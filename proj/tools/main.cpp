#include "minksum/cli.hpp"

int main(int argc, char** argv) { return mink::run_cli(argc, argv); }
