#include <doctest.h>
TEST_CASE("placeholder fem") { CHECK(true); }
