#include <cmath>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "staticlab/profile.hpp"

using namespace staticlab;

TEST_CASE("closed-form profiles evaluate with exact derivative chains", "[profile]") {
  SECTION("trig") {
    auto p = Profile::trig(1.0, 1.0, 0.0, 0.0, 0.0, M_PI);
    const auto v = p.eval(M_PI / 2);
    CHECK(v.d0 == Catch::Approx(1.0).margin(1e-15));
    CHECK(v.d1 == Catch::Approx(0.0).margin(1e-15));
    CHECK(v.d2 == Catch::Approx(-1.0).margin(1e-15));
    CHECK(v.d3 == Catch::Approx(0.0).margin(1e-15));
  }
  SECTION("hyperbolic satisfies its own second-order equation") {
    auto p = Profile::hyperbolic(0.4, 0.6, 1.7, 0.25, -1.0, 1.0);
    for (double s : {-0.9, -0.3, 0.0, 0.5, 0.99}) {
      const auto v = p.eval(s);
      CHECK(v.d2 == Catch::Approx(1.7 * 1.7 * (v.d0 - 0.25)).epsilon(1e-13));
      CHECK(v.d3 == Catch::Approx(1.7 * 1.7 * v.d1).epsilon(1e-13));
    }
  }
  SECTION("power law") {
    auto p = Profile::power_law(2.0, 3.0, 1.0, 2.0, 4.0);
    const auto v = p.eval(3.0);  // 2 (s-1)^3 at s=3
    CHECK(v.d0 == Catch::Approx(16.0));
    CHECK(v.d1 == Catch::Approx(24.0));
    CHECK(v.d2 == Catch::Approx(24.0));
    CHECK(v.d3 == Catch::Approx(12.0));
  }
}

TEST_CASE("analytic first derivatives agree with central differences", "[profile]") {
  const auto profiles = {
      Profile::trig(0.8, 2.0, 0.3, -0.1, 0.0, 2.0),
      Profile::hyperbolic(0.5, 0.5, 1.0, 0.0, -1.0, 1.0),
      Profile::power_law(1.5, -2.0, -0.5, 1.0, 3.0),
      Profile::linear(2.0, -0.7, 0.0, 5.0),
  };
  for (const auto& p : profiles) CHECK(derivative_selfcheck(p) < 1e-6);
}

TEST_CASE("grid profiles interpolate a smooth function to near machine level",
          "[profile]") {
  std::vector<GridNode> nodes;
  for (int i = 0; i <= 14; ++i) {
    const double s = 3.0 * i / 14.0;
    nodes.push_back({s, std::sin(s), std::cos(s), -std::sin(s), -std::cos(s)});
  }
  auto g = Profile::grid(nodes);

  SECTION("node values are reproduced") {
    for (const auto& n : nodes) {
      const auto v = g.eval(n.s);
      CHECK(std::abs(v.d0 - n.d0) < 1e-14);
      CHECK(std::abs(v.d1 - n.d1) < 1e-13);
      CHECK(std::abs(v.d2 - n.d2) < 1e-11);
    }
  }
  SECTION("between nodes") {
    double e0 = 0, e1 = 0, e2 = 0;
    for (int i = 0; i < 200; ++i) {
      const double s = 0.05 + 2.9 * i / 199.0;
      const auto v = g.eval(s);
      e0 = std::max(e0, std::abs(v.d0 - std::sin(s)));
      e1 = std::max(e1, std::abs(v.d1 - std::cos(s)));
      e2 = std::max(e2, std::abs(v.d2 + std::sin(s)));
    }
    CHECK(e0 < 1e-9);
    CHECK(e1 < 1e-8);
    CHECK(e2 < 1e-6);
  }
  SECTION("selfcheck holds on the interpolant too") {
    CHECK(derivative_selfcheck(g) < 1e-6);
  }
}

TEST_CASE("domain handling", "[profile]") {
  auto p = Profile::trig(1.0, 1.0, 0.0, 2.0, 0.0, 1.0);
  SECTION("hairline overshoot is clamped, real overshoot throws") {
    CHECK_NOTHROW(p.eval(1.0 + 1e-13));
    expect_error(Errc::OutOfDomain, [&] { p.eval(1.1); });
    expect_error(Errc::OutOfDomain, [&] { p.eval(-0.2); });
  }
  SECTION("restriction narrows the domain and preserves values") {
    auto q = p.restricted(0.25, 0.75);
    CHECK(q.lo() == Catch::Approx(0.25));
    CHECK(q.hi() == Catch::Approx(0.75));
    CHECK(q.value(0.5) == Catch::Approx(p.value(0.5)));
    expect_error(Errc::OutOfDomain, [&] { q.eval(0.9); });
    // Inverted bounds describe an empty interval, not a point outside the domain.
    expect_error(Errc::DomainTooSmall, [&] { p.restricted(0.5, 0.4); });
    expect_error(Errc::OutOfDomain, [&] { p.restricted(0.5, 1.4); });
  }
}

TEST_CASE("grid construction rejects malformed node lists", "[profile]") {
  expect_error(Errc::TooFewSamples,
               [] { Profile::grid({GridNode{0, 1, 0, 0, 0}}); });
  expect_error(Errc::ParseError, [] {
    Profile::grid({GridNode{1, 1, 0, 0, 0}, GridNode{0, 1, 0, 0, 0}});
  });
  expect_error(Errc::NonFinite, [] {
    Profile::grid({GridNode{0, 1, 0, 0, 0},
                   GridNode{1, std::numeric_limits<double>::infinity(), 0, 0, 0}});
  });
}

TEST_CASE("grid text round-trips exactly", "[profile]") {
  std::vector<GridNode> nodes;
  for (int i = 0; i <= 6; ++i) {
    const double s = 0.7 * i + 0.1;
    nodes.push_back({s, std::exp(-s), -std::exp(-s), std::exp(-s), -std::exp(-s)});
  }
  std::ostringstream os;
  write_grid_text(os, nodes, {"made by the round-trip test"});
  std::istringstream is(os.str());
  const auto doc = read_grid_text(is);
  REQUIRE(doc.nodes.size() == nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    CHECK(doc.nodes[i].s == nodes[i].s);
    CHECK(doc.nodes[i].d0 == nodes[i].d0);
    CHECK(doc.nodes[i].d1 == nodes[i].d1);
    CHECK(doc.nodes[i].d2 == nodes[i].d2);
    CHECK(doc.nodes[i].d3 == nodes[i].d3);
  }
  REQUIRE(doc.comment_lines.size() == 1);
  CHECK(doc.comment_lines[0] == "made by the round-trip test");

  SECTION("missing header is a parse error") {
    std::istringstream bad("0 1 0 0 0\n1 2 0 0 0\n");
    expect_error(Errc::ParseError, [&] { read_grid_text(bad); });
  }
}
