#include "app.hpp"

int main(int argc, char** argv) { return nevlab::cli::run_cli(argc, argv); }
