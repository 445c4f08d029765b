#include "cli.hpp"

int main(int argc, char** argv) { return hurst_sde::cli::cli_dispatch(argc, argv); }
