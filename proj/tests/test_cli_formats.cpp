#include <doctest.h>
TEST_CASE("placeholder cli_formats") { CHECK(true); }
