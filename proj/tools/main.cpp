#include "invnet/cli.hpp"

int main(int argc, char** argv) { return invnet::run_cli(argc, argv); }
