#include <cmath>
#include <set>

#include <catch2/catch_amalgamated.hpp>

#include "helpers.hpp"
#include "staticlab/catalog.hpp"
#include "staticlab/verifier.hpp"

using namespace staticlab;

TEST_CASE("closed-form residuals vanish on a curved product model", "[verifier]") {
  const auto e = build_entry("type_i_R6");
  const auto rep = master_residual(e.model, e.potential);
  CHECK(rep.master_max < 1e-12);
  CHECK(rep.trace_max < 1e-12);
  CHECK(rep.R_used == Catch::Approx(6.0).margin(1e-12));
  for (const auto& [key, val] : rep.component_residuals) {
    INFO(key);
    CHECK(val < 1e-12);
  }
  // x = 1, y = -2 at R = 6: the trace constraint holds, the others do not.
  CHECK(rep.constraint_flags.xR3_plus_y_zero);
  CHECK_FALSE(rep.constraint_flags.R_zero);
  CHECK_FALSE(rep.constraint_flags.y0_zero);
}

TEST_CASE("component identity keys are pinned per model shape", "[verifier]") {
  const std::set<std::string> two_warp_keys{"eq_m20xx", "eq_m04x",    "eq_m04bx",
                                            "eq_m01x",  "eq_m02x",    "eq_m05x_E2",
                                            "eq_m05x_E3", "eq_m10x"};
  const std::set<std::string> single_warp_keys{"eq_m20xx", "eq_m04bx", "eq_m05x_E3"};

  const auto prod = build_entry("type_i_R6");
  std::set<std::string> got;
  for (const auto& [k, v] : master_residual(prod.model, prod.potential).component_residuals)
    got.insert(k);
  CHECK(got == two_warp_keys);

  const auto sphere = build_entry("type_iv_s4");
  got.clear();
  for (const auto& [k, v] :
       master_residual(sphere.model, sphere.potential).component_residuals)
    got.insert(k);
  CHECK(got == single_warp_keys);
}

TEST_CASE("a wrong coupling constant is loudly rejected", "[verifier]") {
  const auto e = build_entry("type_i_R6");
  Potential bad = e.potential;
  bad.y += 0.5;
  const auto rep = master_residual(e.model, bad);
  CHECK(rep.master_max > 0.1);
}

TEST_CASE("dichotomy bound holds on two-equal-eigenvalue models", "[verifier]") {
  for (const char* id : {"type_i_R6", "type_ii_Rm6", "type_iii_a1"}) {
    const auto e = build_entry(id);
    const auto rep = master_residual(e.model, e.potential);
    INFO(id);
    CHECK(rep.dichotomy_max < 1e-7);
  }
}

TEST_CASE("preset pairs against the potential", "[verifier]") {
  SECTION("static matches only the unforced potential") {
    const auto st = build_entry("type_i_R6_static");
    CHECK(specialization_matches(st.potential, Specialization::static_space(), 6.0));
    CHECK_FALSE(specialization_matches(st.potential, Specialization::miao_tam(), 6.0));
  }
  SECTION("critical-point pair is R-dependent") {
    const auto crit = build_entry("type_iv_s4_critical");
    CHECK(specialization_matches(crit.potential, Specialization::critical_point(), 12.0));
    CHECK_FALSE(specialization_matches(crit.potential, Specialization::critical_point(), 6.0));
  }
  SECTION("v-static folds its constant into y") {
    const auto vs = Specialization::v_static(2.0);
    CHECK(vs.x == 0.0);
    CHECK(vs.y == Catch::Approx(-2.0 / 3.0));
  }
}

TEST_CASE("claimed presets are scored at the model's own curvature", "[verifier]") {
  SECTION("a Miao-Tam claim on a positive-curvature product violates the trace") {
    const auto e = build_entry("type_i_R6");
    const auto fl =
        check_specialization(e.model, e.potential, Specialization::miao_tam());
    CHECK_FALSE(fl.xR3_plus_y_zero);
    CHECK_FALSE(fl.R_zero);
    CHECK_FALSE(fl.y0_zero);
  }
  SECTION("a critical-point claim on a scalar-flat model implies the static pair") {
    const auto e = build_entry("type_iii_a1");
    const auto fl =
        check_specialization(e.model, e.potential, Specialization::critical_point());
    CHECK(fl.xR3_plus_y_zero);
    CHECK(fl.R_zero);
    CHECK(fl.y0_zero);
  }
}

TEST_CASE("constant solutions exist exactly when the trace constraint holds", "[verifier]") {
  SECTION("the catalog's constant entry satisfies both halves") {
    const auto e = build_entry("type_i_R6_const");
    const auto chk = lemma_constant_solution(e.model, e.potential);
    CHECK(chk.is_constant_minus_x);
    CHECK(chk.y_condition_holds);
  }
  SECTION("a non-constant potential fails the first half only") {
    const auto e = build_entry("type_i_R6");
    const auto chk = lemma_constant_solution(e.model, e.potential);
    CHECK_FALSE(chk.is_constant_minus_x);
    CHECK(chk.y_condition_holds);
  }
  SECTION("the right constant with the wrong coupling fails the second half") {
    const auto e = build_entry("type_i_R6");
    Potential pot{Profile::constant(-1.0, e.model.lo(), e.model.hi()), 1.0, 0.0};
    const auto chk = lemma_constant_solution(e.model, pot);
    CHECK(chk.is_constant_minus_x);
    CHECK_FALSE(chk.y_condition_holds);
  }
}

TEST_CASE("finite-difference cross-check agrees with the closed forms", "[verifier]") {
  const auto e = build_entry("type_i_R6");
  oracle::OracleOptions opt;
  opt.fd_step = 1e-3;
  const auto cross = master_residual_oracle(e.model, e.potential, 25, opt, true, 11u);
  CHECK(cross.points == 25);
  CHECK(cross.fd_step == 1e-3);
  CHECK(cross.master_max < 2e-4);
  CHECK(cross.ricci_vs_closed_max < 5e-5);
  // Plain-stencil truncation bound; the sharp Codazzi calibration lives with the
  // oracle tests.
  CHECK(cross.codazzi_max < 2e-3);
  CHECK(cross.codazzi_max > 0);
}

TEST_CASE("input contracts", "[verifier]") {
  const auto e = build_entry("type_i_R6");
  SECTION("model and potential domains must overlap") {
    Potential far{Profile::constant(1.0, 50.0, 51.0), 0.0, 0.0};
    expect_error(Errc::EmptyDomainIntersection,
                 [&] { master_residual(e.model, far); });
  }
  SECTION("a varying scalar curvature needs a declared value") {
    std::vector<GridNode> nodes;
    for (int i = 0; i <= 8; ++i) {
      const double s = 2.0 * i / 8.0;
      nodes.push_back({s, 1.0 + 0.1 * s * s, 0.2 * s, 0.2, 0.0});
    }
    const auto m = WarpedModel::single_warp(Profile::grid(nodes), 1.0);
    Potential pot{Profile::constant(1.0, 0.0, 2.0), 0.0, 0.0};
    expect_error(Errc::MissingScalar, [&] { master_residual(m, pot); });
  }
  SECTION("residual sampling needs at least three points") {
    expect_error(Errc::TooFewSamples,
                 [&] { master_residual(e.model, e.potential, 2); });
  }
}
