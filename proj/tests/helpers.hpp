#ifndef STATICLAB_TESTS_HELPERS_HPP
#define STATICLAB_TESTS_HELPERS_HPP

#include <catch2/catch_amalgamated.hpp>

#include "staticlab/common.hpp"

// Runs fn and asserts it throws staticlab::Error with the expected code.
template <typename Fn>
void expect_error(staticlab::Errc code, Fn&& fn) {
  bool threw = false;
  try {
    fn();
  } catch (const staticlab::Error& e) {
    threw = true;
    INFO(e.what());
    REQUIRE(e.code() == code);
  }
  REQUIRE(threw);
}

#endif  // STATICLAB_TESTS_HELPERS_HPP
