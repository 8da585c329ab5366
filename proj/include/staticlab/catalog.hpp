#ifndef STATICLAB_CATALOG_HPP
#define STATICLAB_CATALOG_HPP

// Ready-made (model, potential, expected verdict) triples covering the five model
// families, built either in closed form (products of constant-curvature surfaces)
// or from the defining ODEs (warped families). Every entry is expected to pass the
// verifier at closed-form tolerance, the finite-difference cross-check, and the
// classifier with the recorded type; the test suite enforces that three-way contract.

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "staticlab/classifier.hpp"
#include "staticlab/models.hpp"
#include "staticlab/ode.hpp"
#include "staticlab/profile.hpp"
#include "staticlab/verifier.hpp"

namespace staticlab {

struct CatalogEntry {
  std::string id;
  WarpedModel model;
  Potential potential;
  FamilyType expected_type = FamilyType::Unclassified;
  double expected_R = 0;
  std::string notes;
};

// Entries whose profiles cannot be produced by this library's ODE families (periodic
// or globally-extended warps from external existence analyses). They accept a
// user-supplied grid profile, which then goes through the same verification.
struct ExternalSlot {
  std::string id;
  std::string notes;
};

struct TypeIParams {
  double R = 6;    // must be > 0
  double c1 = 1;   // potential amplitude
  double x = 0;
};

// Product of two positive-curvature surfaces S2(R/6) x S2(R/3) with
// f = c1 cos(sqrt(R/6) s) - x and y = -x R/3.
inline CatalogEntry build_type_i(const TypeIParams& prm, std::string id = "type_i") {
  require(prm.R > 0, Errc::InvalidR, "family I needs R > 0");
  const double m = std::sqrt(prm.R / 6.0);
  const double lo = 0.15 / m, hi = (M_PI - 0.15) / m;
  CatalogEntry e{std::move(id),
                 WarpedModel::surface_product(prm.R / 6.0, prm.R / 3.0, lo, hi,
                                              PBranch::Cosh, prm.R),
                 Potential{Profile::trig(prm.c1, m, M_PI / 2.0, -prm.x, lo, hi),
                           prm.x, -prm.x * prm.R / 3.0},
                 FamilyType::I, prm.R,
                 "product of two positive surfaces, curvature ratio 1:2"};
  return e;
}

struct TypeIIParams {
  double R = -6;   // must be < 0
  double c2 = 1;
  double x = 0;
  PBranch branch = PBranch::Cosh;
};

// Product of two negative-curvature surfaces H2(R/6) x H2(R/3); the base warp solves
// p'' + (R/6) p = 0 and the potential is f = c2 p' - x, y = -x R/3.
inline CatalogEntry build_type_ii(const TypeIIParams& prm, std::string id = "type_ii") {
  require(prm.R < 0, Errc::InvalidR, "family II needs R < 0");
  const double m = std::sqrt(-prm.R / 6.0);
  double lo = -1.1 / m, hi = 1.1 / m;
  Profile f = Profile::hyperbolic(prm.c2 / 2.0, -prm.c2 / 2.0, m, -prm.x, lo, hi);
  if (prm.branch == PBranch::Sinh) {
    lo = 0.2 / m;
    hi = 1.6 / m;
    f = Profile::hyperbolic(prm.c2 / 2.0, prm.c2 / 2.0, m, -prm.x, lo, hi);
  } else if (prm.branch == PBranch::Exp) {
    lo = -0.8 / m;
    hi = 0.8 / m;
    f = Profile::hyperbolic(prm.c2 * m, 0.0, m, -prm.x, lo, hi);
  }
  CatalogEntry e{std::move(id),
                 WarpedModel::surface_product(prm.R / 6.0, prm.R / 3.0, lo, hi,
                                              prm.branch, prm.R),
                 Potential{std::move(f), prm.x, -prm.x * prm.R / 3.0},
                 FamilyType::II, prm.R,
                 "product of two negative surfaces, curvature ratio 1:2"};
  return e;
}

struct TypeIIIParams {
  double alpha = 1;  // nonzero
  double k = 1;      // fiber curvature, > 0
  double c = 1;
  double x = 0;
  double h0 = 4;
  double span = 3;
};

// Line cross warped 3-space: h solves h'' = alpha / h^2 with (h')^2 + 2 alpha/h = k,
// and f = c h'(s) - x with y = 0 (scalar curvature vanishes identically).
inline CatalogEntry build_type_iii(const TypeIIIParams& prm,
                                   std::string id = "type_iii") {
  require(prm.alpha != 0, Errc::InvalidR, "family III needs alpha != 0");
  require(prm.h0 > 0, Errc::NonPositiveWarp, "h0 must be positive");
  const double rad = prm.k - 2.0 * prm.alpha / prm.h0;
  require(rad >= 0, Errc::HorizonViolation,
          "initial radius inside the horizon: k - 2 alpha / h0 < 0");
  ode::H3FamilyParams hp;
  hp.alpha = prm.alpha;
  hp.h0 = prm.h0;
  hp.h0p = std::sqrt(rad);
  hp.s0 = 0;
  hp.span = prm.span;
  // Catalog entries are reference data; run the integrator well below its default
  // tolerance so grid interpolation, not the trajectory, limits the residuals.
  ode::SolverOptions tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  auto traj = ode::integrate_h3(hp, tight);

  // f = c h' - x node-for-node, with the fourth h-derivative giving f'''.
  std::vector<GridNode> fn;
  fn.reserve(traj.h.nodes().size());
  for (const auto& n : traj.h.nodes()) {
    const double h4 = 6.0 * prm.alpha * n.d1 * n.d1 / std::pow(n.d0, 4) -
                      2.0 * prm.alpha * prm.alpha / std::pow(n.d0, 5);
    fn.push_back({n.s, prm.c * n.d1 - prm.x, prm.c * n.d2, prm.c * n.d3, prm.c * h4});
  }
  CatalogEntry e{std::move(id), WarpedModel::line_cross_w3(traj.h, prm.k, 0.0),
                 Potential{Profile::grid(std::move(fn)), prm.x, 0.0},
                 FamilyType::III, 0.0,
                 prm.alpha > 0 ? "line cross 3-d warped space, alpha > 0"
                               : "line cross 3-d warped space, alpha < 0 "
                                 "(incomplete domain)"};
  return e;
}

struct TypeIVParams {
  double R = 12;
  double a = 0;
  double k_fiber = 1;
  double x = 0;
  double y = 0;
  double h0 = 1;
  double h0p = 0;
  double s0 = 0;
  double span = 2;
  double c = 1;              // slope initialization f'(s0)
  bool direct_init = false;  // use (f0, f1) instead (flat charts where h'' == 0)
  double f0 = 1;
  double f1 = 0;
  double trim_h_floor = 0;   // drop trajectory tail once h falls below this
};

// Single warp over a 3-d fiber: h solves h'' = a h^-3 - (R/12) h; the declared
// k_fiber must equal the first integral of the initial data (the integrability
// condition is enforced, never assumed).
inline CatalogEntry build_type_iv(const TypeIVParams& prm,
                                  std::string id = "type_iv") {
  const double fi = ode::first_integral_h4(prm.R, prm.a, prm.h0, prm.h0p);
  require(std::abs(fi - prm.k_fiber) <= 1e-10, Errc::IntegrabilityMismatch,
          "initial data incompatible with the declared fiber curvature");
  ode::HFamilyParams hp;
  hp.R = prm.R;
  hp.a = prm.a;
  hp.h0 = prm.h0;
  hp.h0p = prm.h0p;
  hp.s0 = prm.s0;
  hp.span = prm.span;
  ode::SolverOptions tight;
  tight.rtol = 1e-12;
  tight.atol = 1e-14;
  auto traj = ode::integrate_h4(hp, tight);

  // Trim before touching the potential equation: its coefficients carry the same
  // h^-4 singularity that ends the trajectory, so f is only integrated on the part
  // of the domain that survives the floor.
  if (prm.trim_h_floor > 0) {
    double cut = traj.h.hi();
    for (const auto& n : traj.h.nodes())
      if (n.d0 < prm.trim_h_floor) {
        cut = n.s;
        break;
      }
    require(cut > traj.h.lo(), Errc::DomainTooSmall,
            "trim floor removes entire domain");
    traj.h = traj.h.restricted(traj.h.lo(), cut);
  }

  ode::FFamilyParams fp;
  fp.x = prm.x;
  fp.y = prm.y;
  fp.c = prm.c;
  fp.direct_init = prm.direct_init;
  fp.f0 = prm.f0;
  fp.f1 = prm.f1;
  Profile f = ode::integrate_f_second_order(traj, hp, fp, tight);
  Profile h = traj.h;

  CatalogEntry e{std::move(id), WarpedModel::single_warp(h, prm.k_fiber, prm.R),
                 Potential{std::move(f), prm.x, prm.y},
                 FamilyType::IV, prm.R, "warped product over a 3-d fiber"};
  // Flat charts (h linear with matching fiber curvature) are Ricci-flat and classify
  // as family V even though they are built by the warped-family constructor.
  const auto c0 = ricci_closed_form(e.model, 0.5 * (e.model.lo() + e.model.hi()));
  double cmax = 0;
  for (double v : c0.ricci) cmax = std::max(cmax, std::abs(v));
  if (cmax < 1e-9) {
    e.expected_type = FamilyType::V;
    e.notes = "flat chart of the warped family (Ricci-flat)";
  }
  return e;
}

// Ricci-flat reference entry: the flat cone chart with a constant potential.
inline CatalogEntry build_type_v() {
  ode::HFamilyParams hp;
  hp.R = 0;
  hp.a = 0;
  hp.h0 = 1;
  hp.h0p = 1;
  hp.s0 = 1;
  hp.span = 1;
  auto traj = ode::integrate_h4(hp);
  CatalogEntry e{"type_v", WarpedModel::single_warp(traj.h, 1.0, 0.0),
                 Potential{Profile::constant(1.0, traj.h.lo(), traj.h.hi()), 0.0, 0.0},
                 FamilyType::V, 0.0, "flat chart, constant potential"};
  return e;
}

namespace detail {

inline std::vector<std::pair<std::string, std::function<CatalogEntry()>>>
catalog_builders() {
  const double s0 = 0.35;
  return {
      {"type_i_R6",
       [] { return build_type_i({6, 1, 1}, "type_i_R6"); }},
      {"type_i_R6_static",
       [] { return build_type_i({6, 1, 0}, "type_i_R6_static"); }},
      {"type_i_R6_const",
       [] { return build_type_i({6, 0, 1}, "type_i_R6_const"); }},
      {"type_i_R12",
       [] { return build_type_i({12, 2, 0}, "type_i_R12"); }},
      {"type_ii_Rm6",
       [] { return build_type_ii({-6, 1, 0, PBranch::Cosh}, "type_ii_Rm6"); }},
      {"type_ii_Rm6_x2",
       [] { return build_type_ii({-6, 0, 2, PBranch::Cosh}, "type_ii_Rm6_x2"); }},
      {"type_ii_Rm6_sinh",
       [] { return build_type_ii({-6, 1, 0, PBranch::Sinh}, "type_ii_Rm6_sinh"); }},
      {"type_iii_a1",
       [] { return build_type_iii({1, 1, 2, 1, 4, 3}, "type_iii_a1"); }},
      {"type_iii_a1_static",
       [] { return build_type_iii({1, 1, 1, 0, 4, 3}, "type_iii_a1_static"); }},
      {"type_iii_am1",
       [] { return build_type_iii({-1, 1, 1, 0, 1, 3}, "type_iii_am1"); }},
      {"type_iv_s4",
       [s0] {
         TypeIVParams p;
         p.R = 12;
         p.a = 0;
         p.k_fiber = 1;
         p.h0 = std::sin(s0);
         p.h0p = std::cos(s0);
         p.s0 = s0;
         p.span = M_PI - 2 * s0;
         p.c = -std::sin(s0);  // slope of cos at s0
         return build_type_iv(p, "type_iv_s4");
       }},
      {"type_iv_s4_miaotam",
       [s0] {
         TypeIVParams p;
         p.R = 12;
         p.k_fiber = 1;
         p.h0 = std::sin(s0);
         p.h0p = std::cos(s0);
         p.s0 = s0;
         p.span = M_PI - 2 * s0;
         p.x = 0;
         p.y = -1.0 / 3.0;
         p.c = -std::sin(s0);
         return build_type_iv(p, "type_iv_s4_miaotam");
       }},
      {"type_iv_s4_vstatic",
       [s0] {
         TypeIVParams p;
         p.R = 12;
         p.k_fiber = 1;
         p.h0 = std::sin(s0);
         p.h0p = std::cos(s0);
         p.s0 = s0;
         p.span = M_PI - 2 * s0;
         p.x = 0;
         p.y = -2.0 / 3.0;  // V-static constant c = 2
         p.c = -std::sin(s0);
         return build_type_iv(p, "type_iv_s4_vstatic");
       }},
      {"type_iv_s4_critical",
       [s0] {
         TypeIVParams p;
         p.R = 12;
         p.k_fiber = 1;
         p.h0 = std::sin(s0);
         p.h0p = std::cos(s0);
         p.s0 = s0;
         p.span = M_PI - 2 * s0;
         p.x = 1;
         p.y = -3;  // critical point: y = -R/4
         p.c = -2 * std::sin(s0);
         return build_type_iv(p, "type_iv_s4_critical");
       }},
      {"type_iv_a03",
       [] {
         TypeIVParams p;
         p.R = 12;
         p.a = 0.3;
         p.k_fiber = 1.3;
         p.h0 = 1;
         p.h0p = 0;
         p.s0 = 0;
         p.span = 1.6;
         p.c = 1;
         return build_type_iv(p, "type_iv_a03");
       }},
      {"type_iv_am03",
       [] {
         TypeIVParams p;
         p.R = 12;
         p.a = -0.3;
         p.k_fiber = 0.7;
         p.h0 = 1;
         p.h0p = 0;
         p.s0 = 0;
         p.span = 1.2;
         p.c = 1;
         p.trim_h_floor = 0.6;
         return build_type_iv(p, "type_iv_am03");
       }},
      {"type_iv_flat",
       [] {
         TypeIVParams p;
         p.R = 0;
         p.a = 0;
         p.k_fiber = 1;
         p.h0 = 1;
         p.h0p = 1;
         p.s0 = 1;
         p.span = 1;
         p.x = 0;
         p.y = 0.25;
         p.direct_init = true;  // h'' == 0: slope initialization is degenerate
         p.f0 = 1.0 + 0.25 * 0.5;
         p.f1 = 0.25;
         return build_type_iv(p, "type_iv_flat");
       }},
      {"type_iv_product_r6",
       [] {
         const double m = std::sqrt(2.0);
         const double lo = 0.0, hi = 2.2;
         CatalogEntry e{"type_iv_product_r6",
                        WarpedModel::single_warp(Profile::constant(1.0, lo, hi), 1.0,
                                                 6.0),
                        Potential{Profile::trig(1.0, m, 0.0, -1.0, lo, hi), 1.0,
                                  -2.0},
                        FamilyType::IV, 6.0,
                        "product of a line and a positive 3-d space form"};
         return e;
       }},
      {"type_v", [] { return build_type_v(); }},
  };
}

}  // namespace detail

inline std::vector<std::string> catalog_ids() {
  std::vector<std::string> ids;
  for (const auto& [id, fn] : detail::catalog_builders()) ids.push_back(id);
  return ids;
}

inline const std::vector<ExternalSlot>& external_slots() {
  static const std::vector<ExternalSlot> slots = {
      {"iv_periodic_external",
       "periodic warp over a 3-d fiber; requires an externally produced grid profile "
       "(pass a model file to verify/classify)"},
      {"iv_global_external",
       "globally extended warp; requires an externally produced grid profile "
       "(pass a model file to verify/classify)"},
  };
  return slots;
}

inline bool is_external_slot(const std::string& id) {
  for (const auto& s : external_slots())
    if (s.id == id) return true;
  return false;
}

inline CatalogEntry build_entry(const std::string& id) {
  for (const auto& [key, fn] : detail::catalog_builders())
    if (key == id) return fn();
  fail(Errc::ParseError, "unknown catalog id: " + id);
}

inline std::vector<CatalogEntry> build_all_entries() {
  std::vector<CatalogEntry> out;
  for (const auto& [id, fn] : detail::catalog_builders()) out.push_back(fn());
  return out;
}

}  // namespace staticlab

#endif  // STATICLAB_CATALOG_HPP
