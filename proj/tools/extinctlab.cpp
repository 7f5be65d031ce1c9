#include "extinctlab/cli.hpp"

int main(int argc, char** argv) { return extinctlab::run_cli(argc, argv); }
