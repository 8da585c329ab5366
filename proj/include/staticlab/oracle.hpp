#ifndef STATICLAB_ORACLE_HPP
#define STATICLAB_ORACLE_HPP

// Finite-difference curvature oracle. Everything here is derived from coordinate
// evaluations of the metric alone (second-order central differences), so it gives an
// independent cross-check of the closed-form curvature path:
//
//   two-warp chart    x = (s, t, r, theta),
//                     g = diag(1, p(s)^2, h(s)^2, h(s)^2 u_k(r)^2)
//   single-warp chart g = diag(1, h(s)^2, h(s)^2 u_k(t)^2, h(s)^2 u_k(t)^2 sin(r)^2)
//
// where u_k solves u'' = -k u with u(0) = 0, u'(0) = 1 (the geodesic polar profile of
// the constant-curvature fiber). The s-diagonal is 1 by construction, so the metric is
// already scale-normalized for differencing. Evaluation is refused near the fiber
// poles (|u| < 1e-3) where the polar chart degenerates.

#include <array>
#include <cmath>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "staticlab/common.hpp"
#include "staticlab/models.hpp"
#include "staticlab/profile.hpp"

namespace staticlab::oracle {

struct CoordinatePoint {
  double s = 0, t = 0, r = 0, theta = 0;
  std::array<double, 4> as_array() const { return {s, t, r, theta}; }
};

struct OracleOptions {
  double fd_step = 1e-3;
  // One Richardson extrapolation step (combine fd_step and fd_step/2 results); lifts
  // the truncation order from 2 to 4 at roughly double the cost. Off by default so
  // the error model stays the plain second-order one.
  bool richardson = false;
};

using Mat4 = std::array<std::array<double, 4>, 4>;

inline double polar_u(double k, double r) {
  if (k > 0) {
    const double m = std::sqrt(k);
    return std::sin(m * r) / m;
  }
  if (k < 0) {
    const double m = std::sqrt(-k);
    return std::sinh(m * r) / m;
  }
  return r;
}

constexpr double kPoleFloor = 1e-3;

inline Mat4 metric_at(const WarpedModel& m, const CoordinatePoint& pt) {
  const double h = m.h.value(pt.s);
  require(h > 0, Errc::SingularMetric, "h(s) <= 0 in chart");
  Mat4 g{};
  g[0][0] = 1.0;
  if (m.two_warp()) {
    const double p = m.p.value(pt.s);
    require(p > 0, Errc::SingularMetric, "p(s) <= 0 in chart");
    const double u = polar_u(m.fiber_k, pt.r);
    require(std::abs(u) >= kPoleFloor, Errc::SingularMetric,
            "fiber chart too close to a pole (|u| < 1e-3)");
    g[1][1] = p * p;
    g[2][2] = h * h;
    g[3][3] = h * h * u * u;
  } else {
    const double u = polar_u(m.fiber_k, pt.t);
    const double v = std::sin(pt.r);
    require(std::abs(u) >= kPoleFloor && std::abs(v) >= kPoleFloor, Errc::SingularMetric,
            "fiber chart too close to a pole (|u| < 1e-3)");
    g[1][1] = h * h;
    g[2][2] = h * h * u * u;
    g[3][3] = h * h * u * u * v * v;
  }
  return g;
}

namespace detail {

inline Mat4 metric_shifted(const WarpedModel& m, const CoordinatePoint& pt,
                           const std::array<double, 4>& d) {
  return metric_at(m, {pt.s + d[0], pt.t + d[1], pt.r + d[2], pt.theta + d[3]});
}

inline Mat4 inverse(const Mat4& a) {
  // Gauss-Jordan with partial pivoting.
  std::array<std::array<double, 8>, 4> w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) w[i][j] = a[i][j];
    w[i][4 + i] = 1.0;
  }
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int rr = col + 1; rr < 4; ++rr)
      if (std::abs(w[rr][col]) > std::abs(w[piv][col])) piv = rr;
    require(std::abs(w[piv][col]) > 1e-14, Errc::SingularMetric,
            "metric not invertible at evaluation point");
    std::swap(w[col], w[piv]);
    const double inv = 1.0 / w[col][col];
    for (int j = 0; j < 8; ++j) w[col][j] *= inv;
    for (int rr = 0; rr < 4; ++rr) {
      if (rr == col) continue;
      const double f = w[rr][col];
      for (int j = 0; j < 8; ++j) w[rr][j] -= f * w[col][j];
    }
  }
  Mat4 out{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out[i][j] = w[i][4 + j];
  return out;
}

struct MetricJet {
  Mat4 g{};
  Mat4 ginv{};
  std::array<Mat4, 4> d1{};                  // d1[i] = partial_i g
  std::array<std::array<Mat4, 4>, 4> d2{};   // d2[i][j] = partial_i partial_j g
};

inline void check_radial_margin(const WarpedModel& m, double s, double extent) {
  require(s - extent >= m.lo() - 1e-12 && s + extent <= m.hi() + 1e-12,
          Errc::StencilOutOfDomain,
          "finite-difference stencil leaves the radial domain at s=" + std::to_string(s));
}

inline MetricJet metric_jet(const WarpedModel& m, const CoordinatePoint& pt, double step) {
  check_radial_margin(m, pt.s, step);
  MetricJet jet;
  jet.g = metric_at(m, pt);
  jet.ginv = inverse(jet.g);
  std::array<Mat4, 4> plus, minus;
  for (int i = 0; i < 4; ++i) {
    std::array<double, 4> d{};
    d[i] = step;
    plus[i] = metric_shifted(m, pt, d);
    d[i] = -step;
    minus[i] = metric_shifted(m, pt, d);
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        jet.d1[i][a][b] = (plus[i][a][b] - minus[i][a][b]) / (2 * step);
        jet.d2[i][i][a][b] =
            (plus[i][a][b] - 2 * jet.g[a][b] + minus[i][a][b]) / (step * step);
      }
  }
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      std::array<double, 4> d{};
      d[i] = step;
      d[j] = step;
      const Mat4 pp = metric_shifted(m, pt, d);
      d[j] = -step;
      const Mat4 pm = metric_shifted(m, pt, d);
      d[i] = -step;
      d[j] = step;
      const Mat4 mp = metric_shifted(m, pt, d);
      d[j] = -step;
      const Mat4 mm = metric_shifted(m, pt, d);
      for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
          const double v = (pp[a][b] - pm[a][b] - mp[a][b] + mm[a][b]) / (4 * step * step);
          jet.d2[i][j][a][b] = v;
          jet.d2[j][i][a][b] = v;
        }
    }
  }
  return jet;
}

using Chris = std::array<Mat4, 4>;  // [upper][lower][lower]

inline Chris christoffel(const MetricJet& jet) {
  Chris low{};  // first kind: low[l][j][k] = Gamma_{l,jk}
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        low[l][j][k] = 0.5 * (jet.d1[j][l][k] + jet.d1[k][l][j] - jet.d1[l][j][k]);
  Chris up{};
  for (int mday = 0; mday < 4; ++mday)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k) {
        double acc = 0;
        for (int l = 0; l < 4; ++l) acc += jet.ginv[mday][l] * low[l][j][k];
        up[mday][j][k] = acc;
      }
  return up;
}

// Coordinate Ricci tensor assembled from the metric jet:
//   R_jk = d_m Gamma^m_jk - d_j Gamma^m_mk + Gamma^m_ml Gamma^l_jk - Gamma^m_jl Gamma^l_mk
inline Mat4 ricci_coord(const MetricJet& jet) {
  Chris low{};
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 4; ++j)
      for (int k = 0; k < 4; ++k)
        low[l][j][k] = 0.5 * (jet.d1[j][l][k] + jet.d1[k][l][j] - jet.d1[l][j][k]);
  const Chris up = christoffel(jet);

  // dlow[i][l][j][k] = partial_i Gamma_{l,jk}
  std::array<Chris, 4> dlow{};
  for (int i = 0; i < 4; ++i)
    for (int l = 0; l < 4; ++l)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k)
          dlow[i][l][j][k] =
              0.5 * (jet.d2[i][j][l][k] + jet.d2[i][k][l][j] - jet.d2[i][l][j][k]);

  // dginv[i] = -ginv * d1[i] * ginv
  std::array<Mat4, 4> dginv{};
  for (int i = 0; i < 4; ++i)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) {
        double acc = 0;
        for (int c = 0; c < 4; ++c)
          for (int d = 0; d < 4; ++d)
            acc += jet.ginv[a][c] * jet.d1[i][c][d] * jet.ginv[d][b];
        dginv[i][a][b] = -acc;
      }

  // dup[i][m][j][k] = partial_i Gamma^m_jk
  std::array<Chris, 4> dup{};
  for (int i = 0; i < 4; ++i)
    for (int mm = 0; mm < 4; ++mm)
      for (int j = 0; j < 4; ++j)
        for (int k = 0; k < 4; ++k) {
          double acc = 0;
          for (int l = 0; l < 4; ++l)
            acc += dginv[i][mm][l] * low[l][j][k] + jet.ginv[mm][l] * dlow[i][l][j][k];
          dup[i][mm][j][k] = acc;
        }

  Mat4 ric{};
  for (int j = 0; j < 4; ++j)
    for (int k = 0; k < 4; ++k) {
      double acc = 0;
      for (int mm = 0; mm < 4; ++mm) {
        acc += dup[mm][mm][j][k] - dup[j][mm][mm][k];
        for (int l = 0; l < 4; ++l)
          acc += up[mm][mm][l] * up[l][j][k] - up[mm][j][l] * up[l][mm][k];
      }
      ric[j][k] = acc;
    }
  return ric;
}

// nabla[k][i][j] = nabla_k Ric_ij in coordinates, all from central differences.
inline std::array<Mat4, 4> nabla_ricci(const WarpedModel& m, const CoordinatePoint& pt,
                                       double step) {
  const auto jet = metric_jet(m, pt, step);
  const auto up = christoffel(jet);
  const Mat4 ric0 = ricci_coord(jet);

  std::array<Mat4, 4> dric{};
  for (int i = 0; i < 4; ++i) {
    CoordinatePoint pp = pt, pm = pt;
    std::array<double*, 4> fp = {&pp.s, &pp.t, &pp.r, &pp.theta};
    std::array<double*, 4> fm = {&pm.s, &pm.t, &pm.r, &pm.theta};
    *fp[i] += step;
    *fm[i] -= step;
    const Mat4 rp = ricci_coord(metric_jet(m, pp, step));
    const Mat4 rm = ricci_coord(metric_jet(m, pm, step));
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) dric[i][a][b] = (rp[a][b] - rm[a][b]) / (2 * step);
  }

  std::array<Mat4, 4> nabla{};
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        double acc = dric[k][i][j];
        for (int mm = 0; mm < 4; ++mm)
          acc -= up[mm][k][i] * ric0[mm][j] + up[mm][k][j] * ric0[i][mm];
        nabla[k][i][j] = acc;
      }
  return nabla;
}

}  // namespace detail

struct RicciReport {
  Mat4 coord{};                       // coordinate Ricci tensor
  std::array<double, 4> frame{};      // orthonormal-frame diagonal
  double frame_offdiag_max = 0;
  double scalar = 0;
};

inline RicciReport ricci_fd(const WarpedModel& m, const CoordinatePoint& pt,
                            const OracleOptions& opt = {}) {
  require(opt.fd_step > 0, Errc::InvalidTolerance, "fd_step must be positive");
  const auto jet = detail::metric_jet(m, pt, opt.fd_step);
  RicciReport rep;
  rep.coord = detail::ricci_coord(jet);
  if (opt.richardson) {
    const auto fine = detail::ricci_coord(detail::metric_jet(m, pt, opt.fd_step / 2));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j)
        rep.coord[i][j] = (4.0 * fine[i][j] - rep.coord[i][j]) / 3.0;
  }
  for (int i = 0; i < 4; ++i) rep.frame[i] = rep.coord[i][i] / jet.g[i][i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      rep.frame_offdiag_max =
          std::max(rep.frame_offdiag_max,
                   std::abs(rep.coord[i][j]) / std::sqrt(jet.g[i][i] * jet.g[j][j]));
    }
  rep.scalar = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) rep.scalar += jet.ginv[i][j] * rep.coord[i][j];
  return rep;
}

// Max frame-normalized component of (nabla_k Ric_ij - nabla_i Ric_kj): the divergence
// of the curvature obstruction. Zero (to truncation order) exactly when the Ricci
// tensor is a Codazzi tensor, which is the harmonic-curvature condition for models
// with constant scalar curvature.
inline double codazzi_residual_fd(const WarpedModel& m, const CoordinatePoint& pt,
                                  const OracleOptions& opt = {}) {
  require(opt.fd_step > 0, Errc::InvalidTolerance, "fd_step must be positive");
  const double step = opt.fd_step;
  detail::check_radial_margin(m, pt.s, 2 * step);
  auto nabla = detail::nabla_ricci(m, pt, step);
  if (opt.richardson) {
    const auto fine = detail::nabla_ricci(m, pt, step / 2);
    for (int k = 0; k < 4; ++k)
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
          nabla[k][i][j] = (4.0 * fine[k][i][j] - nabla[k][i][j]) / 3.0;
  }
  const Mat4 g = metric_at(m, pt);
  double worst = 0;
  for (int k = 0; k < 4; ++k)
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        const double c = nabla[k][i][j] - nabla[i][k][j];
        const double norm = std::sqrt(g[k][k] * g[i][i] * g[j][j]);
        worst = std::max(worst, std::abs(c) / norm);
      }
  return worst;
}

struct HessianReport {
  std::array<double, 4> frame{};  // orthonormal-frame diagonal of nabla df
  double frame_offdiag_max = 0;
};

namespace detail {

inline Mat4 hessian_coord(const WarpedModel& m, const Profile& f,
                          const CoordinatePoint& pt, double step) {
  const auto jet = metric_jet(m, pt, step);
  const auto up = christoffel(jet);
  const double fc = f.value(pt.s);
  const double fp = (f.value(pt.s + step) - f.value(pt.s - step)) / (2 * step);
  const double fpp =
      (f.value(pt.s + step) - 2 * fc + f.value(pt.s - step)) / (step * step);
  Mat4 hess{};
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      const double dd = (i == 0 && j == 0) ? fpp : 0.0;
      hess[i][j] = dd - up[0][i][j] * fp;
    }
  return hess;
}

}  // namespace detail

inline HessianReport covariant_hessian_fd(const WarpedModel& m, const Profile& f,
                                          const CoordinatePoint& pt,
                                          const OracleOptions& opt = {}) {
  require(opt.fd_step > 0, Errc::InvalidTolerance, "fd_step must be positive");
  const double step = opt.fd_step;
  detail::check_radial_margin(m, pt.s, step);
  require(pt.s - step >= f.lo() - 1e-12 && pt.s + step <= f.hi() + 1e-12,
          Errc::StencilOutOfDomain, "potential stencil leaves the profile domain");
  Mat4 hess = detail::hessian_coord(m, f, pt, step);
  if (opt.richardson) {
    const Mat4 fine = detail::hessian_coord(m, f, pt, step / 2);
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) hess[i][j] = (4.0 * fine[i][j] - hess[i][j]) / 3.0;
  }
  const Mat4 g = metric_at(m, pt);
  HessianReport rep;
  for (int i = 0; i < 4; ++i) rep.frame[i] = hess[i][i] / g[i][i];
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) {
      if (i == j) continue;
      rep.frame_offdiag_max = std::max(
          rep.frame_offdiag_max, std::abs(hess[i][j]) / std::sqrt(g[i][i] * g[j][j]));
    }
  return rep;
}

// Deterministic interior sample points with stencil margins in s and pole margins in
// the fiber coordinates. With a seed, points are drawn uniformly from the same safe
// region instead.
inline std::vector<CoordinatePoint> oracle_points(const WarpedModel& m, int count,
                                                  double fd_step,
                                                  std::optional<unsigned> seed = {}) {
  require(count >= 1, Errc::TooFewSamples, "need at least one oracle point");
  const double lo = m.lo(), hi = m.hi();
  const double margin = std::max(4 * fd_step, 0.04 * (hi - lo));
  const double a = lo + margin, b = hi - margin;
  require(b > a, Errc::DomainTooSmall, "domain too small for the stencil margin");

  const double k = m.fiber_k;
  auto polar_range = [](double kk) {
    // Safe radius window for the polar factor u_kk: away from the origin pole and,
    // for kk > 0, away from the antipodal pole at pi/sqrt(kk).
    const double top = kk > 0 ? M_PI / std::sqrt(kk) : 2.0;
    return std::pair<double, double>(0.2 * top, 0.7 * top);
  };

  std::vector<CoordinatePoint> pts;
  pts.reserve(static_cast<std::size_t>(count));
  if (seed) {
    std::mt19937 rng(*seed);
    std::uniform_real_distribution<double> us(a, b);
    const auto pr = polar_range(m.two_warp() ? k : k);
    std::uniform_real_distribution<double> upol(pr.first, pr.second);
    std::uniform_real_distribution<double> uang(0.3, 2.5);
    std::uniform_real_distribution<double> usin(0.4, M_PI - 0.4);
    for (int i = 0; i < count; ++i) {
      CoordinatePoint pt;
      pt.s = us(rng);
      if (m.two_warp()) {
        pt.t = uang(rng);
        pt.r = upol(rng);
      } else {
        pt.t = upol(rng);
        pt.r = usin(rng);
      }
      pt.theta = uang(rng);
      pts.push_back(pt);
    }
    return pts;
  }

  const auto pr = polar_range(k);
  for (int i = 0; i < count; ++i) {
    const double u = count == 1 ? 0.5 : static_cast<double>(i) / (count - 1);
    CoordinatePoint pt;
    pt.s = 0.5 * (a + b) - 0.5 * (b - a) * std::cos(M_PI * u);
    const double fib = pr.first + (pr.second - pr.first) * (0.17 + 0.61 * std::fmod(0.37 * i + 0.21, 1.0));
    if (m.two_warp()) {
      pt.t = 0.4 + 0.2 * (i % 5);
      pt.r = fib;
    } else {
      pt.t = fib;
      pt.r = 0.6 + 0.15 * (i % 7);
    }
    pt.theta = 0.3 + 0.1 * (i % 9);
    pts.push_back(pt);
  }
  return pts;
}

}  // namespace staticlab::oracle

#endif  // STATICLAB_ORACLE_HPP
