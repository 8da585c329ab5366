#include <algorithm>
#include <cmath>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/classifier.hpp"

using namespace staticlab;

TEST_CASE("every catalog entry verifies and classifies as declared", "[catalog]") {
  const auto entries = build_all_entries();
  REQUIRE(entries.size() >= 19);
  for (const auto& e : entries) {
    INFO(e.id);
    const auto rep = master_residual(e.model, e.potential);
    CHECK(rep.master_max < 1e-7);
    CHECK(rep.trace_max < 1e-7);
    CHECK(rep.R_used == Catch::Approx(e.expected_R).margin(1e-7));
    const auto v = classify_theorem1(e.model, e.potential,
                                     eigen_profile_closed_form(e.model));
    CHECK(v.pattern.type == e.expected_type);
  }
}

TEST_CASE("two-equal entries satisfy the slope dichotomy everywhere", "[catalog]") {
  for (const auto& e : build_all_entries()) {
    if (e.expected_type != FamilyType::I && e.expected_type != FamilyType::II &&
        e.expected_type != FamilyType::III)
      continue;
    INFO(e.id);
    CHECK(master_residual(e.model, e.potential).dichotomy_max < 1e-7);
  }
}

TEST_CASE("registry bookkeeping", "[catalog]") {
  const auto ids = catalog_ids();
  CHECK(ids.size() >= 19);
  for (const char* id : {"type_i_R6", "type_ii_Rm6_sinh", "type_iii_am1",
                         "type_iv_am03", "type_iv_product_r6", "type_v"})
    CHECK(std::find(ids.begin(), ids.end(), id) != ids.end());

  CHECK(is_external_slot("iv_periodic_external"));
  CHECK(is_external_slot("iv_global_external"));
  CHECK_FALSE(is_external_slot("type_i_R6"));
  // External slots have no builder: their data comes from a model file.
  for (const auto& slot : external_slots())
    CHECK(std::find(ids.begin(), ids.end(), slot.id) == ids.end());
  expect_error(Errc::ParseError, [] { build_entry("iv_periodic_external"); });
  expect_error(Errc::ParseError, [] { build_entry("definitely_not_a_model"); });
}

TEST_CASE("builder input contracts", "[catalog]") {
  SECTION("positive-curvature products need R > 0") {
    TypeIParams p;
    p.R = -6;
    expect_error(Errc::InvalidR, [&] { build_type_i(p); });
  }
  SECTION("the inverse-square family needs a nonzero source") {
    TypeIIIParams p;
    p.alpha = 0;
    expect_error(Errc::InvalidR, [&] { build_type_iii(p); });
  }
  SECTION("the horizon bound k - 2 alpha / h0 >= 0 is enforced") {
    TypeIIIParams p;
    p.alpha = 1;
    p.k = 1;
    p.h0 = 1;  // k - 2 alpha / h0 = -1
    expect_error(Errc::HorizonViolation, [&] { build_type_iii(p); });
  }
  SECTION("initial data must reproduce the declared fiber curvature") {
    TypeIVParams p;
    p.R = 12;
    p.a = 0;
    p.h0 = 1;
    p.h0p = 0;  // first integral is 1
    p.k_fiber = 2;
    expect_error(Errc::IntegrabilityMismatch, [&] { build_type_iv(p); });
  }
}

TEST_CASE("tail trimming keeps the model clear of the warp floor", "[catalog]") {
  const auto e = build_entry("type_iv_am03");
  CHECK(e.model.hi() < 0.8);  // the untrimmed run spans 1.2
  CHECK(e.model.hi() > 0.7);
  const double h_end = e.model.h.value(e.model.hi());
  CHECK(h_end > 0.55);
  CHECK(h_end < 0.65);
  // Everything left of the cut sits above the floor.
  for (const auto& n : e.model.h.nodes())
    if (n.s < e.model.hi() - 1e-12) CHECK(n.d0 >= 0.6);
}

TEST_CASE("the flat chart built by the warped constructor reports family V",
          "[catalog]") {
  const auto e = build_entry("type_iv_flat");
  CHECK(e.expected_type == FamilyType::V);
  CHECK(e.notes.find("flat chart") != std::string::npos);
  const auto c = ricci_closed_form(e.model, 0.5 * (e.model.lo() + e.model.hi()));
  for (double v : c.ricci) CHECK(std::abs(v) < 1e-9);
}
