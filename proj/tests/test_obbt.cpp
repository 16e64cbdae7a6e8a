#include <doctest.h>
TEST_CASE("placeholder obbt") { CHECK(true); }
