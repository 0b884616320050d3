#include "charvar/cli.hpp"

int main(int argc, char** argv) { return charvar::run(argc, argv); }
