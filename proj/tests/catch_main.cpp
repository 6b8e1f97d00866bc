// Catch2 runtime for every unit-test binary; provides main().
#include <catch2/catch_amalgamated.cpp>
