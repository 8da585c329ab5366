#ifndef STATICLAB_ODE_HPP
#define STATICLAB_ODE_HPP

// Adaptive RK5(4) (Dormand-Prince) integration for the two warp-factor families
//
//   quartic family (4-d):  h'' = a*h^-3 - (R/12)*h,   first integral
//                          (h')^2 + a*h^-2 + (R/12)*h^2 = k
//   cubic family   (3-d):  h'' = alpha*h^-2,          first integral
//                          (h')^2 + 2*alpha/h = k
//
// and for the radial potential equation driven by a quartic-family trajectory:
//
//   f'' = -f*(R/12 + 3a*h^-4) + 3x*(R/12 - a*h^-4) + y.
//
// Every accepted step becomes a grid node carrying (value, slope, curvature, jerk),
// so trajectories evaluate anywhere in the achieved domain through the profile
// interpolant. The first integral is monitored at every accepted node; integration
// halts cleanly (truncating the domain) when the warp factor collapses below
// 1e-8 * h(start), with the stop location bisected to 1e-10.

#include <array>
#include <cmath>
#include <cstddef>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "staticlab/common.hpp"
#include "staticlab/profile.hpp"

namespace staticlab::ode {

struct SolverOptions {
  double rtol = 1e-10;
  double atol = 1e-12;
  double max_step = 0.0;  // 0 = no cap beyond the remaining span
  double safety = 0.9;
  std::size_t max_steps = 2000000;
};

inline void validate(const SolverOptions& opt) {
  require(opt.rtol > 0 && opt.rtol < 1, Errc::InvalidTolerance, "rtol must be in (0, 1)");
  require(opt.atol > 0, Errc::InvalidTolerance, "atol must be positive");
  require(opt.safety > 0 && opt.safety < 1, Errc::InvalidTolerance, "safety factor");
  require(opt.max_step >= 0, Errc::InvalidTolerance, "max_step must be >= 0");
}

namespace dp {
// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                 b5 = -2187.0 / 6784, b6 = 11.0 / 84;
constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                 e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                 e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;
}  // namespace dp

namespace detail {

template <std::size_t N>
using State = std::array<double, N>;

template <std::size_t N>
struct RawNode {
  double t;
  State<N> y;
};

template <std::size_t N>
struct RawResult {
  std::vector<RawNode<N>> nodes;
  bool collapsed = false;
};

template <std::size_t N, typename Rhs>
State<N> rhs_checked(Rhs&& rhs, double t, const State<N>& y) {
  State<N> d = rhs(t, y);
  return d;  // finiteness handled by the error norm: bad values reject the step
}

// Integrates y' = rhs(t, y) over [t0, t1]. If floor0 >= 0, stops when component 0
// drops to floor0, locating the crossing by bisection on the step's cubic Hermite
// interpolant. Records every accepted node.
template <std::size_t N, typename Rhs>
RawResult<N> integrate(Rhs&& rhs, double t0, double t1, State<N> y,
                       const SolverOptions& opt, double floor0 = -1.0) {
  validate(opt);
  const double span = t1 - t0;
  require(span > 0, Errc::DomainTooSmall, "integration span must be positive");
  const double min_step = 1e-14 * span;

  RawResult<N> out;
  out.nodes.push_back({t0, y});

  State<N> k1 = rhs(t0, y);
  for (double v : k1) require_finite(v, "rhs at initial state");

  double t = t0;
  double h = span / 100.0;
  if (opt.max_step > 0) h = std::min(h, opt.max_step);
  const double y0_scale = std::abs(y[0]);

  auto hermite_component = [](double ya, double da, double yb, double db, double w,
                              double u) {
    // Cubic Hermite on [0, w] evaluated at u, with endpoint values/slopes.
    const double x = u / w;
    const double x2 = x * x, x3 = x2 * x;
    return ya * (2 * x3 - 3 * x2 + 1) + da * w * (x3 - 2 * x2 + x) +
           yb * (-2 * x3 + 3 * x2) + db * w * (x3 - x2);
  };

  for (std::size_t step = 0;; ++step) {
    if (t >= t1) break;
    bool clipped = false;
    if (t + h >= t1) {
      h = t1 - t;
      clipped = true;
    }
    if (step >= opt.max_steps || (h < min_step && !clipped)) {
      // Families with a right-hand side that is singular at y0 = 0 stall the step
      // controller just above the collapse floor instead of reaching it. A stalled
      // trajectory that has already lost three orders of magnitude and is still
      // shrinking is a collapse, reported at the last accepted node.
      if (floor0 >= 0 && y[0] <= 1e-3 * y0_scale && k1[0] < 0) {
        out.collapsed = true;
        return out;
      }
      require(step < opt.max_steps, Errc::StepFailure, "step budget exhausted");
      fail(Errc::StepFailure, "step size underflow at s=" + std::to_string(t));
    }

    State<N> k2, k3, k4, k5, k6, k7, ynew, yerr;
    State<N> tmp;
    for (std::size_t i = 0; i < N; ++i) tmp[i] = y[i] + h * dp::a21 * k1[i];
    k2 = rhs(t + dp::c2 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (dp::a31 * k1[i] + dp::a32 * k2[i]);
    k3 = rhs(t + dp::c3 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (dp::a41 * k1[i] + dp::a42 * k2[i] + dp::a43 * k3[i]);
    k4 = rhs(t + dp::c4 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (dp::a51 * k1[i] + dp::a52 * k2[i] + dp::a53 * k3[i] +
                           dp::a54 * k4[i]);
    k5 = rhs(t + dp::c5 * h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      tmp[i] = y[i] + h * (dp::a61 * k1[i] + dp::a62 * k2[i] + dp::a63 * k3[i] +
                           dp::a64 * k4[i] + dp::a65 * k5[i]);
    k6 = rhs(t + h, tmp);
    for (std::size_t i = 0; i < N; ++i)
      ynew[i] = y[i] + h * (dp::b1 * k1[i] + dp::b3 * k3[i] + dp::b4 * k4[i] +
                            dp::b5 * k5[i] + dp::b6 * k6[i]);
    k7 = rhs(t + h, ynew);
    for (std::size_t i = 0; i < N; ++i)
      yerr[i] = h * (dp::e1 * k1[i] + dp::e3 * k3[i] + dp::e4 * k4[i] + dp::e5 * k5[i] +
                     dp::e6 * k6[i] + dp::e7 * k7[i]);

    double err_norm = 0;
    bool finite = true;
    for (std::size_t i = 0; i < N; ++i) {
      if (!std::isfinite(ynew[i]) || !std::isfinite(yerr[i])) {
        finite = false;
        break;
      }
      const double scale = opt.atol + opt.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double r = yerr[i] / scale;
      err_norm += r * r;
    }
    err_norm = finite ? std::sqrt(err_norm / N) : std::numeric_limits<double>::infinity();

    if (err_norm <= 1.0) {
      // Accepted. Check the collapse guard before committing the full step.
      if (floor0 >= 0 && ynew[0] <= floor0) {
        double ua = 0, ub = h;
        // Bisection on the Hermite interpolant of component 0 to 1e-10 in s.
        while (ub - ua > 1e-10) {
          const double um = 0.5 * (ua + ub);
          const double hm = hermite_component(y[0], k1[0], ynew[0], k7[0], h, um);
          (hm <= floor0 ? ub : ua) = um;
        }
        const double ue = 0.5 * (ua + ub);
        RawNode<N> ev;
        ev.t = t + ue;
        for (std::size_t i = 0; i < N; ++i)
          ev.y[i] = hermite_component(y[i], k1[i], ynew[i], k7[i], h, ue);
        if (ev.t > out.nodes.back().t) out.nodes.push_back(ev);
        out.collapsed = true;
        return out;
      }
      t = clipped ? t1 : t + h;
      y = ynew;
      k1 = k7;  // FSAL
      out.nodes.push_back({t, y});
    }

    const double q = (err_norm > 0) ? std::pow(err_norm, -0.2) : 5.0;
    double factor = std::min(5.0, std::max(0.2, opt.safety * q));
    if (err_norm > 1.0) factor = std::min(factor, opt.safety);
    h *= factor;
    if (opt.max_step > 0) h = std::min(h, opt.max_step);
  }
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// warp families
// ---------------------------------------------------------------------------

struct HFamilyParams {
  double R = 0;   // scalar curvature of the 4-d model the trajectory belongs to
  double a = 0;   // strength of the h^-3 term
  double h0 = 1;  // h(s0) > 0
  double h0p = 0; // h'(s0)
  double s0 = 0;
  double span = 1;
};

struct H3FamilyParams {
  double alpha = 0;  // strength of the h^-2 term
  double h0 = 1;
  double h0p = 0;
  double s0 = 0;
  double span = 1;
};

struct Trajectory {
  Profile h;                     // grid profile over the achieved domain
  double first_integral_k = 0;   // value fixed by the initial data
  double max_drift = 0;          // max |FI(node) - k| over output nodes
  bool collapsed = false;        // stopped at the h -> 0 guard before span end
  double s_end = 0;              // achieved right endpoint
};

inline double first_integral_h4(double R, double a, double h, double hp) {
  return hp * hp + a / (h * h) + (R / 12.0) * h * h;
}

inline double first_integral_h3(double alpha, double h, double hp) {
  return hp * hp + 2.0 * alpha / h;
}

inline Trajectory integrate_h4(const HFamilyParams& p, const SolverOptions& opt = {}) {
  require(p.h0 > 0, Errc::NonPositiveWarp, "h(s0) must be positive");
  require(p.span > 0, Errc::DomainTooSmall, "span must be positive");
  require_finite(p.R, "R");
  require_finite(p.a, "a");
  const double R = p.R, a = p.a;
  auto rhs = [R, a](double, const detail::State<2>& y) -> detail::State<2> {
    const double inv3 = 1.0 / (y[0] * y[0] * y[0]);
    return {y[1], a * inv3 - (R / 12.0) * y[0]};
  };
  auto raw = detail::integrate<2>(rhs, p.s0, p.s0 + p.span, {p.h0, p.h0p}, opt,
                                  1e-8 * p.h0);
  const double k = first_integral_h4(R, a, p.h0, p.h0p);
  Trajectory traj{Profile::constant(1, 0, 1), k, 0, raw.collapsed, raw.nodes.back().t};
  std::vector<GridNode> nodes;
  nodes.reserve(raw.nodes.size());
  for (const auto& n : raw.nodes) {
    const double h = n.y[0], hp = n.y[1];
    const double inv3 = 1.0 / (h * h * h);
    const double d2 = a * inv3 - (R / 12.0) * h;
    const double d3 = (-3.0 * a * inv3 / h - R / 12.0) * hp;
    nodes.push_back({n.t, h, hp, d2, d3});
    traj.max_drift = std::max(traj.max_drift, std::abs(first_integral_h4(R, a, h, hp) - k));
  }
  traj.h = Profile::grid(std::move(nodes));
  return traj;
}

inline Trajectory integrate_h3(const H3FamilyParams& p, const SolverOptions& opt = {}) {
  require(p.h0 > 0, Errc::NonPositiveWarp, "h(s0) must be positive");
  require(p.span > 0, Errc::DomainTooSmall, "span must be positive");
  require_finite(p.alpha, "alpha");
  const double alpha = p.alpha;
  auto rhs = [alpha](double, const detail::State<2>& y) -> detail::State<2> {
    return {y[1], alpha / (y[0] * y[0])};
  };
  auto raw = detail::integrate<2>(rhs, p.s0, p.s0 + p.span, {p.h0, p.h0p}, opt,
                                  1e-8 * p.h0);
  const double k = first_integral_h3(alpha, p.h0, p.h0p);
  Trajectory traj{Profile::constant(1, 0, 1), k, 0, raw.collapsed, raw.nodes.back().t};
  std::vector<GridNode> nodes;
  nodes.reserve(raw.nodes.size());
  for (const auto& n : raw.nodes) {
    const double h = n.y[0], hp = n.y[1];
    const double d2 = alpha / (h * h);
    const double d3 = -2.0 * alpha * hp / (h * h * h);
    nodes.push_back({n.t, h, hp, d2, d3});
    traj.max_drift = std::max(traj.max_drift, std::abs(first_integral_h3(alpha, h, hp) - k));
  }
  traj.h = Profile::grid(std::move(nodes));
  return traj;
}

// ---------------------------------------------------------------------------
// potential equation
// ---------------------------------------------------------------------------

struct FFamilyParams {
  double x = 0;
  double y = 0;
  // Default initialization: prescribe the slope c = f'(s0) and recover f(s0) from the
  // first-order compatibility constraint, which needs h''(s0) != 0. The direct mode
  // bypasses that and takes (f0, f1) as given; builders use it when h'' vanishes
  // identically (flat charts) with the slope fixed by the same constraint.
  double c = 1;
  bool direct_init = false;
  double f0 = 0;
  double f1 = 0;
};

inline Profile integrate_f_second_order(const Trajectory& htraj, const HFamilyParams& hp,
                                        const FFamilyParams& fp,
                                        const SolverOptions& opt = {}) {
  const Profile& h = htraj.h;
  const double s0 = h.lo(), s1 = h.hi();
  const double R = hp.R, a = hp.a, x = fp.x, yv = fp.y;

  double f0, f1;
  if (fp.direct_init) {
    f0 = fp.f0;
    f1 = fp.f1;
  } else {
    const ProfileValue h0 = h.eval(s0);
    require(std::abs(h0.d2) >= 1e-12 * std::max(1.0, std::abs(h0.d0)),
            Errc::DegenerateInitialization,
            "h''(s0) vanishes; the slope-based initialization is undetermined");
    f0 = (fp.c * h0.d1 - (x * (h0.d2 + (R / 3.0) * h0.d0) + yv * h0.d0)) / h0.d2;
    f1 = fp.c;
  }

  auto rhs = [&h, R, a, x, yv](double s, const detail::State<2>& st) -> detail::State<2> {
    const double hv = h.value(s);
    const double inv4 = 1.0 / (hv * hv * hv * hv);
    return {st[1],
            -st[0] * (R / 12.0 + 3.0 * a * inv4) + 3.0 * x * (R / 12.0 - a * inv4) + yv};
  };
  auto raw = detail::integrate<2>(rhs, s0, s1, {f0, f1}, opt, -1.0);

  std::vector<GridNode> nodes;
  nodes.reserve(raw.nodes.size());
  for (const auto& n : raw.nodes) {
    const ProfileValue hv = h.eval(n.t);
    const double inv4 = 1.0 / (hv.d0 * hv.d0 * hv.d0 * hv.d0);
    const double d2 =
        -n.y[0] * (R / 12.0 + 3.0 * a * inv4) + 3.0 * x * (R / 12.0 - a * inv4) + yv;
    const double d3 = -n.y[1] * (R / 12.0 + 3.0 * a * inv4) +
                      12.0 * a * (n.y[0] + x) * inv4 / hv.d0 * hv.d1;
    nodes.push_back({n.t, n.y[0], n.y[1], d2, d3});
  }
  return Profile::grid(std::move(nodes));
}

// Residual of the first-order compatibility constraint
//   h' f' - f h'' = x (h'' + (R/3) h) + y h
// sampled on the common domain of h and f (Chebyshev-Lobatto points). Integration
// produces f through the second-order equation; this is the independent check.
inline double first_order_constraint_residual(const Profile& h, const Profile& f, double R,
                                              double x, double y, int samples = 101) {
  require(samples >= 2, Errc::TooFewSamples, "need at least 2 samples");
  const double lo = std::max(h.lo(), f.lo());
  const double hi = std::min(h.hi(), f.hi());
  require(hi > lo, Errc::EmptyDomainIntersection, "h and f domains do not overlap");
  const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
  double worst = 0;
  for (int j = 0; j < samples; ++j) {
    const double s = mid + half * std::cos(M_PI * j / (samples - 1));
    const ProfileValue hv = h.eval(s), fv = f.eval(s);
    const double res =
        hv.d1 * fv.d1 - fv.d0 * hv.d2 - x * (hv.d2 + (R / 3.0) * hv.d0) - y * hv.d0;
    worst = std::max(worst, std::abs(res));
  }
  return worst;
}

// ---------------------------------------------------------------------------
// serialization: grid format plus a sidecar comment line with the conserved data
// ---------------------------------------------------------------------------

inline void write_trajectory_text(std::ostream& os, const Trajectory& traj) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "first_integral_k=%.17g max_drift=%.17g collapsed=%d",
                traj.first_integral_k, traj.max_drift, traj.collapsed ? 1 : 0);
  write_grid_text(os, traj.h.nodes(), {buf});
}

inline Trajectory read_trajectory_text(std::istream& is) {
  GridDocument doc = read_grid_text(is);
  Trajectory traj{Profile::grid(doc.nodes), 0, 0, false, 0};
  traj.s_end = traj.h.hi();
  bool have_k = false;
  for (const auto& line : doc.comment_lines) {
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) continue;
      const std::string key = tok.substr(0, eq);
      const std::string val = tok.substr(eq + 1);
      if (key == "first_integral_k") {
        traj.first_integral_k = std::strtod(val.c_str(), nullptr);
        have_k = true;
      } else if (key == "max_drift") {
        traj.max_drift = std::strtod(val.c_str(), nullptr);
      } else if (key == "collapsed") {
        traj.collapsed = val == "1";
      }
    }
  }
  require(have_k, Errc::ParseError, "trajectory text lacks first_integral_k sidecar");
  return traj;
}

}  // namespace staticlab::ode

#endif  // STATICLAB_ODE_HPP
