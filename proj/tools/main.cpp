#include "dyad/cli.hpp"

int main(int argc, char** argv) { return dyad::cli_dispatch(argc, argv); }
