#include "transops/cli.hpp"

int main(int argc, char** argv) { return transops::run_cli(argc, argv); }
