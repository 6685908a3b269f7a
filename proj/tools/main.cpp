#include "pbgfluor/cli.hpp"

int main(int argc, char** argv) { return pbgfluor::run_cli(argc, argv); }
