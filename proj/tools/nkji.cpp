#include "nkji/cli.hpp"

int main(int argc, char** argv) { return nkji::dispatch(argc, argv); }
