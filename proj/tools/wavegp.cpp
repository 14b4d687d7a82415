#include "wavegp/cli.hpp"

int main(int argc, char** argv) { return wavegp::run(argc, argv); }
