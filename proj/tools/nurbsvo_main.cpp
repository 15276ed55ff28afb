#include "nurbsvo/cli.hpp"

int main(int argc, char** argv) { return nurbsvo::run_cli(argc, argv); }
