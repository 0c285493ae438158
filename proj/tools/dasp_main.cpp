#include "dasp/cli.hpp"

int main(int argc, char** argv) { return dasp::cli::dispatch(argc, argv); }
