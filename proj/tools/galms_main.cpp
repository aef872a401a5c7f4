#include "galms/experiments.hpp"

int main(int argc, char** argv) { return galms::cli_main(argc, argv); }
