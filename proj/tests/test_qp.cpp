#include <doctest.h>
TEST_CASE("placeholder qp") { CHECK(true); }
