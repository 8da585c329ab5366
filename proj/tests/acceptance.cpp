// Acceptance gate: ten end-to-end checks over the model families, the integrators,
// the finite-difference oracle, and the command-line tool. Each check prints exactly
// one PASS/FAIL line; the process exits nonzero if any fails.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "staticlab/staticlab.hpp"

#ifndef STATICLAB_CLI_PATH
#error "STATICLAB_CLI_PATH must point at the command-line binary"
#endif

using namespace staticlab;

namespace {

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                   t0)
      .count();
}

char detail_buf[256];

// 1. Product of two spheres: master residual vanishes in closed form, stays at
//    truncation level under the finite-difference oracle, and runs fast.
bool crit_product_master() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = build_entry("type_i_R6");
  const auto rr = master_residual(e.model, e.potential, 101);
  oracle::OracleOptions opt;
  opt.fd_step = 1e-3;
  const auto oc = master_residual_oracle(e.model, e.potential, 25, opt, true);
  const double elapsed = ms_since(t0);
  std::snprintf(detail_buf, sizeof detail_buf,
                "closed %.1e (gate 1e-10), oracle %.1e (gate 1e-4), %.1f ms (gate 1000)",
                rr.master_max, oc.master_max, elapsed);
  return rr.master_max < 1e-10 && oc.master_max < 1e-4 && elapsed < 1000.0;
}

// 2. Unit round sphere: Ricci diagonal (3,3,3,3) in closed form and under the
//    oracle, and the three reference potential triples all satisfy the master
//    equation after integration.
bool crit_round_sphere() {
  const auto e = build_entry("type_iv_s4");
  double closed_err = 0;
  const auto ep = eigen_profile_closed_form(e.model);
  for (const auto& row : ep.samples)
    for (int i = 1; i <= 4; ++i)
      closed_err = std::max(closed_err, std::abs(row[i] - 3.0));

  oracle::OracleOptions opt;
  opt.fd_step = 1e-4;
  double oracle_err = 0;
  for (const auto& pt : oracle::oracle_points(e.model, 12, opt.fd_step)) {
    const auto rep = oracle::ricci_fd(e.model, pt, opt);
    for (int i = 0; i < 4; ++i)
      oracle_err = std::max(oracle_err, std::abs(rep.frame[i] - 3.0));
  }

  struct Trip {
    double c, x, y;
  };
  double pot_err = 0;
  for (const Trip t : {Trip{1, 0, 0}, Trip{2, 1, -3}, Trip{1, 1, 0}}) {
    TypeIVParams p;
    p.R = 12;
    p.k_fiber = 1;
    p.h0 = std::sin(0.35);
    p.h0p = std::cos(0.35);
    p.s0 = 0.35;
    p.span = M_PI - 0.7;
    p.x = t.x;
    p.y = t.y;
    p.c = -t.c * std::sin(0.35);
    const auto ent = build_type_iv(p, "sphere_potential");
    pot_err = std::max(pot_err,
                       master_residual(ent.model, ent.potential, 101).master_max);
  }
  std::snprintf(detail_buf, sizeof detail_buf,
                "closed %.1e (gate 1e-9), oracle %.1e (gate 1e-6), potentials %.1e "
                "(gate 1e-8)",
                closed_err, oracle_err, pot_err);
  return closed_err < 1e-9 && oracle_err < 1e-6 && pot_err < 1e-8;
}

// 3. Conserved-quantity drift across the warp equation's parameter grid, including
//    the two collapsing runs, plus the inverse-square family.
bool crit_first_integrals() {
  struct Run {
    double R, a, h0p;
  };
  double drift = 0;
  bool ok = true;
  for (const Run r : {Run{12, 0.3, 0}, Run{0, 0, 1}, Run{0, 0.3, 0}, Run{0, -0.3, 2},
                      Run{-12, 0, 0}, Run{-12, 0.3, 0}, Run{-12, -0.3, 0}}) {
    ode::HFamilyParams hp;
    hp.R = r.R;
    hp.a = r.a;
    hp.h0 = 1;
    hp.h0p = r.h0p;
    hp.span = 5;
    const auto t = ode::integrate_h4(hp);
    drift = std::max(drift, t.max_drift);
    ok = ok && !t.collapsed;
  }

  // Runs into the warp's zero: the trajectory must truncate, not fail.
  ode::HFamilyParams c1;
  c1.R = 12;
  c1.span = 5;
  const auto t1 = ode::integrate_h4(c1);
  ok = ok && t1.collapsed && std::abs(t1.s_end - M_PI / 2) < 1e-6;
  ode::HFamilyParams c2;
  c2.R = 12;
  c2.a = -0.3;
  c2.span = 5;
  const auto t2 = ode::integrate_h4(c2);
  ok = ok && t2.collapsed && t2.s_end > 1.0 && t2.s_end < 1.1;

  struct R3 {
    double alpha, h0, h0p;
  };
  for (const R3 r : {R3{1, 4, std::sqrt(0.5)}, R3{-1, 4, std::sqrt(1.5)}, R3{0, 1, 1}}) {
    ode::H3FamilyParams hp;
    hp.alpha = r.alpha;
    hp.h0 = r.h0;
    hp.h0p = r.h0p;
    hp.span = 5;
    drift = std::max(drift, ode::integrate_h3(hp).max_drift);
  }
  std::snprintf(detail_buf, sizeof detail_buf,
                "worst drift %.1e (gate 1e-8), collapse ends %.4f / %.4f", drift,
                t1.s_end, t2.s_end);
  return ok && drift < 1e-8;
}

// 4. Inverse-square family: sampled eigenvalues match (-2t, 0, t, t) with
//    t = alpha/h^3, scalar curvature vanishes, the classifier lands on family III,
//    and the slope-built potentials solve the static equation.
bool crit_inverse_square_family() {
  const auto e = build_entry("type_iii_a1");
  const auto ep = eigen_profile_closed_form(e.model);
  double eig_err = 0, scal = 0;
  for (const auto& row : ep.samples) {
    const double h = e.model.h.value(row[0]);
    const double t = 1.0 / (h * h * h);
    const double lam[4] = {-2.0 * t, 0.0, t, t};
    for (int i = 0; i < 4; ++i)
      eig_err = std::max(eig_err, std::abs(row[1 + i] - lam[i]));
    scal = std::max(scal, std::abs(row[1] + row[2] + row[3] + row[4]));
  }
  const auto v = classify_theorem1(e.model, e.potential, ep);
  double master = 0;
  for (const double c : {1.0, 2.0})
    for (const double x : {0.0, 1.0}) {
      const auto ent = build_type_iii({1, 1, c, x, 4, 3}, "slope_potential");
      master =
          std::max(master, master_residual(ent.model, ent.potential, 101).master_max);
    }
  std::snprintf(detail_buf, sizeof detail_buf,
                "eig %.1e (gate 1e-8), |R| %.1e (gate 1e-9), type %s, static %.1e "
                "(gate 1e-8)",
                eig_err, scal, family_type_name(v.pattern.type), master);
  return eig_err < 1e-8 && scal < 1e-9 && v.pattern.type == FamilyType::III &&
         master < 1e-8;
}

// 5. Codazzi condition: the refined stencil stays under 1e-4 on every catalog
//    entry, and a generic warp that solves nothing is flagged at the 1e-2 level.
bool crit_codazzi(const std::vector<CatalogEntry>& entries) {
  oracle::OracleOptions rich;
  rich.fd_step = 1e-3;
  rich.richardson = true;
  double worst = 0;
  std::string worst_id = "-";
  for (const auto& e : entries) {
    for (const auto& pt : oracle::oracle_points(e.model, 10, 2e-3)) {
      const double c = oracle::codazzi_residual_fd(e.model, pt, rich);
      if (c > worst) {
        worst = c;
        worst_id = e.id;
      }
    }
  }

  std::vector<GridNode> nodes;
  for (int i = 0; i <= 8; ++i) {
    const double s = 2.0 * i / 8.0;
    nodes.push_back({s, 1.0 + 0.1 * s * s, 0.2 * s, 0.2, 0.0});
  }
  const auto bad = WarpedModel::single_warp(Profile::grid(nodes), 1.0);
  const double control =
      oracle::codazzi_residual_fd(bad, oracle::CoordinatePoint{1.0, 0.5, 0.45, 0.3}, rich);
  std::snprintf(detail_buf, sizeof detail_buf,
                "worst %.1e on %s (gate 1e-4), negative control %.1e (gate > 1e-2)",
                worst, worst_id.c_str(), control);
  return worst < 1e-4 && control > 1e-2;
}

// 6. Obstruction algebra on random slope triples.
bool crit_obstruction_algebra() {
  std::mt19937 rng(777u);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst_p = 0, worst_perm = 0, worst_quot = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = u(rng), b = u(rng), c = u(rng);
    const auto obs = obstruction_values(a, b, c);
    const double half_sq =
        0.5 * ((a - b) * (a - b) + (b - c) * (b - c) + (a - c) * (a - c));
    worst_p = std::max(worst_p, std::abs(obs.P - half_sq));
    const double perms[6][3] = {{a, b, c}, {a, c, b}, {b, a, c},
                                {b, c, a}, {c, a, b}, {c, b, a}};
    for (const auto& p : perms) {
      const auto alt = obstruction_values(p[0], p[1], p[2]);
      worst_perm = std::max(worst_perm, std::abs(alt.P - obs.P));
      worst_perm = std::max(worst_perm, std::abs(alt.A - obs.A));
    }
    if (obs.P > 1e-6) {
      const double rhs = (a - b) * (a - c) * (b - c) * (b - c);
      worst_quot = std::max(worst_quot, std::abs(4.0 * obs.gamma_product * obs.P - rhs));
    }
  }
  std::snprintf(detail_buf, sizeof detail_buf,
                "P-identity %.1e, permutation %.1e (gates 1e-12), quotient %.1e "
                "(gate 1e-10)",
                worst_p, worst_perm, worst_quot);
  return worst_p < 1e-12 && worst_perm < 1e-12 && worst_quot < 1e-10;
}

// 7. Slope dichotomy: on every entry whose fiber spectrum has the two-equal
//    pattern, each sample satisfies ab = -R/12 or b = 0.
bool crit_dichotomy(const std::vector<CatalogEntry>& entries) {
  double worst = 0;
  int count = 0;
  for (const auto& e : entries) {
    const auto pat = eigen_multiplicity(eigen_profile_closed_form(e.model));
    if (pat.signature != SpectralSignature::TwoEqualAmongFiber) continue;
    ++count;
    worst = std::max(worst,
                     master_residual(e.model, e.potential, 101).dichotomy_max);
  }
  std::snprintf(detail_buf, sizeof detail_buf,
                "%d two-equal entries, worst %.1e (gate 1e-7)", count, worst);
  return count >= 8 && worst < 1e-7;
}

int cli_exit(const std::string& args) {
  const std::string cmd =
      std::string("\"") + STATICLAB_CLI_PATH + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. Specialization matrix through the command-line tool: the exit code accepts
//    exactly the (family, preset) cells the constraint algebra allows.
bool crit_specialization_matrix() {
  struct Cell {
    const char* id;
    const char* spec;
    int expected;
  };
  const Cell cells[] = {
      {"type_i_R6_static", "static", 0},
      {"type_i_R6_static", "miao-tam", 1},
      {"type_i_R6_static", "v-static:2", 1},
      {"type_i_R6_static", "critical-point", 1},
      {"type_i_R6", "critical-point", 1},
      {"type_iii_a1_static", "static", 0},
      {"type_iii_a1", "critical-point", 0},
      {"type_iii_a1", "miao-tam", 1},
      {"type_iii_a1", "v-static:2", 1},
      {"type_iv_s4", "static", 0},
      {"type_iv_s4", "miao-tam", 1},
      {"type_iv_s4_miaotam", "miao-tam", 0},
      {"type_iv_s4_vstatic", "v-static:2", 0},
      {"type_iv_s4_critical", "critical-point", 0},
  };
  int wrong = 0;
  const char* first_bad = "-";
  for (const auto& cell : cells) {
    const int got = cli_exit(std::string("verify --catalog ") + cell.id + " --spec " +
                             cell.spec);
    if (got != cell.expected && wrong++ == 0) first_bad = cell.id;
  }
  std::snprintf(detail_buf, sizeof detail_buf, "%zu cells, %d wrong%s%s",
                std::size(cells), wrong, wrong ? ", first bad: " : "",
                wrong ? first_bad : "");
  return wrong == 0;
}

// 9. Convergence order of the curvature oracle: halving the step divides the
//    closed-form discrepancy by about four on three different geometries.
bool crit_oracle_convergence() {
  double lo_ratio = 1e9, hi_ratio = 0;
  for (const char* id : {"type_i_R6", "type_iv_s4", "type_iii_a1"}) {
    const auto e = build_entry(id);
    const auto pts = oracle::oracle_points(e.model, 8, 2e-3);
    double err[2] = {0, 0};
    int j = 0;
    for (const double step : {2e-3, 1e-3}) {
      oracle::OracleOptions opt;
      opt.fd_step = step;
      double worst = 0;
      for (const auto& pt : pts) {
        const auto rep = oracle::ricci_fd(e.model, pt, opt);
        const auto cf = ricci_closed_form(e.model, pt.s);
        for (int i = 0; i < 4; ++i)
          worst = std::max(worst, std::abs(rep.frame[i] - cf.ricci[i]));
      }
      err[j++] = worst;
    }
    const double ratio = err[0] / err[1];
    lo_ratio = std::min(lo_ratio, ratio);
    hi_ratio = std::max(hi_ratio, ratio);
  }
  std::snprintf(detail_buf, sizeof detail_buf, "ratios in [%.2f, %.2f] (gate [3.5, 4.5])",
                lo_ratio, hi_ratio);
  return lo_ratio >= 3.5 && hi_ratio <= 4.5;
}

// 10. Radial functions only: at fixed s, the oracle's Ricci diagonal must not move
//     as the fiber coordinates vary.
bool crit_level_set_constancy(const std::vector<CatalogEntry>& entries) {
  oracle::OracleOptions opt;
  opt.fd_step = 1e-4;
  double worst = 0;
  std::string worst_id = "-";
  for (const auto& e : entries) {
    const double s = 0.5 * (e.model.lo() + e.model.hi());
    double lo[4] = {0, 0, 0, 0}, hi[4] = {0, 0, 0, 0};
    bool first = true;
    for (auto pt : oracle::oracle_points(e.model, 10, opt.fd_step, 7u)) {
      pt.s = s;  // vary only the fiber coordinates
      const auto rep = oracle::ricci_fd(e.model, pt, opt);
      for (int i = 0; i < 4; ++i) {
        if (first) {
          lo[i] = hi[i] = rep.frame[i];
        } else {
          lo[i] = std::min(lo[i], rep.frame[i]);
          hi[i] = std::max(hi[i], rep.frame[i]);
        }
      }
      first = false;
    }
    for (int i = 0; i < 4; ++i)
      if (hi[i] - lo[i] > worst) {
        worst = hi[i] - lo[i];
        worst_id = e.id;
      }
  }
  std::snprintf(detail_buf, sizeof detail_buf, "worst spread %.1e on %s (gate 1e-6)",
                worst, worst_id.c_str());
  return worst < 1e-6;
}

}  // namespace

int main() {
  const auto entries = build_all_entries();

  struct Criterion {
    const char* label;
    bool (*fn)();
    bool (*fn_entries)(const std::vector<CatalogEntry>&);
  };
  const Criterion table[] = {
      {"product-model master residuals", crit_product_master, nullptr},
      {"round-sphere curvature and potentials", crit_round_sphere, nullptr},
      {"first-integral conservation", crit_first_integrals, nullptr},
      {"inverse-square family spectrum", crit_inverse_square_family, nullptr},
      {"Codazzi gate", nullptr, crit_codazzi},
      {"obstruction algebra", crit_obstruction_algebra, nullptr},
      {"slope dichotomy", nullptr, crit_dichotomy},
      {"specialization matrix", crit_specialization_matrix, nullptr},
      {"oracle convergence order", crit_oracle_convergence, nullptr},
      {"level-set constancy", nullptr, crit_level_set_constancy},
  };

  int failures = 0;
  int idx = 0;
  for (const auto& c : table) {
    ++idx;
    bool pass = false;
    detail_buf[0] = '\0';
    try {
      pass = c.fn ? c.fn() : c.fn_entries(entries);
    } catch (const std::exception& ex) {
      std::snprintf(detail_buf, sizeof detail_buf, "exception: %s", ex.what());
    }
    std::printf("criterion %2d (%s): %s  [%s]\n", idx, c.label,
                pass ? "PASS" : "FAIL", detail_buf);
    if (!pass) ++failures;
  }
  std::printf("acceptance: %d/10 criteria passed\n", 10 - failures);
  return failures == 0 ? 0 : 1;
}
