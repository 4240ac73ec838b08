#include "blockdyn/cli.hpp"

int main(int argc, char** argv) { return blockdyn::cli::parse_and_dispatch(argc, argv); }
