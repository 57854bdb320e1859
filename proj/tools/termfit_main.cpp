#include "termfit/cli_app.hpp"

int main(int argc, char** argv) { return termfit::run_cli(argc, argv); }
