#ifndef STATICLAB_PROFILE_HPP
#define STATICLAB_PROFILE_HPP

// Scalar warp/potential profiles over a closed interval. A profile evaluates to its
// value and first three derivatives in one call. Closed-form families cover the
// constant, linear, trigonometric, hyperbolic and power-law shapes used by the model
// builders; grid profiles carry ODE output as (s, d0, d1, d2, d3) nodes and are
// evaluated with the two-point Hermite interpolant of degree 7 per segment, which
// reproduces all four stored derivatives at every node and stays C^3 across nodes.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "staticlab/common.hpp"

namespace staticlab {

struct ProfileValue {
  double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
};

struct GridNode {
  double s = 0;
  double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
};

enum class ProfileKind { Constant, Linear, Trig, HyperbolicTrig, PowerLaw, Grid };

inline const char* profile_kind_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::Constant: return "constant";
    case ProfileKind::Linear: return "linear";
    case ProfileKind::Trig: return "trig";
    case ProfileKind::HyperbolicTrig: return "hyperbolic";
    case ProfileKind::PowerLaw: return "power";
    case ProfileKind::Grid: return "grid";
  }
  return "unknown";
}

namespace detail {

// Newton coefficients of the degree-7 interpolant matching value and first three
// derivatives at both segment endpoints (node multiplicity 4).
struct SegmentCoef {
  double s0 = 0, s1 = 0;
  std::array<double, 8> c{};
};

inline SegmentCoef hermite7_segment(const GridNode& a, const GridNode& b) {
  SegmentCoef seg;
  seg.s0 = a.s;
  seg.s1 = b.s;
  const std::array<double, 8> z = {a.s, a.s, a.s, a.s, b.s, b.s, b.s, b.s};
  // dd[i] holds the current divided-difference column, updated in place.
  std::array<double, 8> dd = {a.d0, a.d0, a.d0, a.d0, b.d0, b.d0, b.d0, b.d0};
  const std::array<std::array<double, 3>, 2> dv = {{
      {a.d1, a.d2 / 2.0, a.d3 / 6.0},
      {b.d1, b.d2 / 2.0, b.d3 / 6.0},
  }};
  seg.c[0] = dd[0];
  for (int k = 1; k < 8; ++k) {
    for (int i = 0; i + k < 8; ++i) {
      if (z[i + k] == z[i]) {
        dd[i] = dv[i < 4 ? 0 : 1][k - 1];
      } else {
        dd[i] = (dd[i + 1] - dd[i]) / (z[i + k] - z[i]);
      }
    }
    seg.c[k] = dd[0];
  }
  return seg;
}

inline ProfileValue hermite7_eval(const SegmentCoef& seg, double s) {
  const std::array<double, 8> z = {seg.s0, seg.s0, seg.s0, seg.s0,
                                   seg.s1, seg.s1, seg.s1, seg.s1};
  double v = seg.c[7], v1 = 0, v2 = 0, v3 = 0;
  for (int j = 6; j >= 0; --j) {
    const double w = s - z[j];
    v3 = v3 * w + 3.0 * v2;
    v2 = v2 * w + 2.0 * v1;
    v1 = v1 * w + v;
    v = v * w + seg.c[j];
  }
  return {v, v1, v2, v3};
}

}  // namespace detail

class Profile {
 public:
  static Profile constant(double c, double lo, double hi) {
    Profile p(ProfileKind::Constant, lo, hi);
    p.prm_ = {c, 0, 0, 0};
    return p;
  }

  static Profile linear(double c0, double c1, double lo, double hi) {
    Profile p(ProfileKind::Linear, lo, hi);
    p.prm_ = {c0, c1, 0, 0};
    return p;
  }

  // amplitude * sin(frequency * s + phase) + offset
  static Profile trig(double amplitude, double frequency, double phase, double offset,
                      double lo, double hi) {
    Profile p(ProfileKind::Trig, lo, hi);
    p.prm_ = {amplitude, frequency, phase, offset};
    return p;
  }

  // c_plus * exp(rate * s) + c_minus * exp(-rate * s) + offset
  static Profile hyperbolic(double c_plus, double c_minus, double rate, double offset,
                            double lo, double hi) {
    Profile p(ProfileKind::HyperbolicTrig, lo, hi);
    p.prm_ = {c_plus, c_minus, rate, offset};
    return p;
  }

  // coeff * (s - shift)^exponent
  static Profile power_law(double coeff, double exponent, double shift, double lo, double hi) {
    Profile p(ProfileKind::PowerLaw, lo, hi);
    p.prm_ = {coeff, exponent, shift, 0};
    return p;
  }

  static Profile grid(std::vector<GridNode> nodes) {
    require(nodes.size() >= 2, Errc::TooFewSamples, "grid profile needs at least 2 nodes");
    for (const auto& n : nodes)
      require(std::isfinite(n.s) && std::isfinite(n.d0) && std::isfinite(n.d1) &&
                  std::isfinite(n.d2) && std::isfinite(n.d3),
              Errc::NonFinite, "grid node");
    require(std::is_sorted(nodes.begin(), nodes.end(),
                           [](const GridNode& a, const GridNode& b) { return a.s < b.s; }),
            Errc::ParseError, "grid nodes must be sorted by s");
    const double span = nodes.back().s - nodes.front().s;
    require(span > 0, Errc::DomainTooSmall, "grid profile spans a single point");
    // Drop nodes that coincide with their successor up to 1e-12 of the span (keeps the
    // later node: event endpoints produced by bisection take precedence).
    std::vector<GridNode> kept;
    kept.reserve(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      if (!kept.empty() && nodes[i].s - kept.back().s < 1e-12 * span) kept.pop_back();
      kept.push_back(nodes[i]);
    }
    require(kept.size() >= 2, Errc::TooFewSamples, "grid profile needs 2 distinct nodes");
    Profile p(ProfileKind::Grid, kept.front().s, kept.back().s);
    p.nodes_ = std::move(kept);
    p.segs_.reserve(p.nodes_.size() - 1);
    for (std::size_t i = 0; i + 1 < p.nodes_.size(); ++i) {
      auto seg = detail::hermite7_segment(p.nodes_[i], p.nodes_[i + 1]);
      for (double c : seg.c) require_finite(c, "grid segment coefficient");
      p.segs_.push_back(seg);
    }
    return p;
  }

  ProfileValue eval(double s) const {
    s = clamp_to_domain(s);
    ProfileValue v;
    switch (kind_) {
      case ProfileKind::Constant:
        v = {prm_[0], 0, 0, 0};
        break;
      case ProfileKind::Linear:
        v = {prm_[0] + prm_[1] * s, prm_[1], 0, 0};
        break;
      case ProfileKind::Trig: {
        const double A = prm_[0], w = prm_[1], ph = prm_[2], off = prm_[3];
        const double sn = std::sin(w * s + ph), cs = std::cos(w * s + ph);
        v = {A * sn + off, A * w * cs, -A * w * w * sn, -A * w * w * w * cs};
        break;
      }
      case ProfileKind::HyperbolicTrig: {
        const double cp = prm_[0], cm = prm_[1], r = prm_[2], off = prm_[3];
        const double ep = std::exp(r * s), em = std::exp(-r * s);
        v = {cp * ep + cm * em + off, r * (cp * ep - cm * em), r * r * (cp * ep + cm * em),
             r * r * r * (cp * ep - cm * em)};
        break;
      }
      case ProfileKind::PowerLaw: {
        const double c = prm_[0], e = prm_[1], u = s - prm_[2];
        const double p0 = c * std::pow(u, e);
        const double p1 = c * e * std::pow(u, e - 1);
        const double p2 = c * e * (e - 1) * std::pow(u, e - 2);
        const double p3 = c * e * (e - 1) * (e - 2) * std::pow(u, e - 3);
        v = {p0, p1, p2, p3};
        break;
      }
      case ProfileKind::Grid: {
        const auto it = std::upper_bound(
            nodes_.begin(), nodes_.end(), s,
            [](double val, const GridNode& n) { return val < n.s; });
        std::size_t idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
        idx = (idx == 0) ? 0 : idx - 1;
        if (idx >= segs_.size()) idx = segs_.size() - 1;
        v = detail::hermite7_eval(segs_[idx], s);
        break;
      }
    }
    require_finite(v.d0, "profile value");
    require_finite(v.d1, "profile derivative");
    require_finite(v.d2, "profile second derivative");
    require_finite(v.d3, "profile third derivative");
    return v;
  }

  double value(double s) const { return eval(s).d0; }
  double operator()(double s) const { return eval(s).d0; }

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double length() const { return hi_ - lo_; }
  bool contains(double s) const {
    const double tol = 1e-12 * length();
    return s >= lo_ - tol && s <= hi_ + tol;
  }

  ProfileKind kind() const { return kind_; }
  bool is_grid() const { return kind_ == ProfileKind::Grid; }
  const std::vector<GridNode>& nodes() const {
    require(is_grid(), Errc::WrongModelClass, "nodes() on a closed-form profile");
    return nodes_;
  }
  const std::array<double, 4>& params() const { return prm_; }

  // Same shape restricted to [lo, hi] (grid profiles keep interior nodes and gain exact
  // endpoint nodes via interpolation).
  Profile restricted(double lo, double hi) const {
    require(hi > lo, Errc::DomainTooSmall, "restricted domain is empty");
    require(contains(lo) && contains(hi), Errc::OutOfDomain, "restriction exceeds domain");
    if (kind_ != ProfileKind::Grid) {
      Profile p(kind_, lo, hi);
      p.prm_ = prm_;
      return p;
    }
    std::vector<GridNode> ns;
    const ProfileValue a = eval(lo);
    ns.push_back({lo, a.d0, a.d1, a.d2, a.d3});
    for (const auto& n : nodes_)
      if (n.s > lo && n.s < hi) ns.push_back(n);
    const ProfileValue b = eval(hi);
    ns.push_back({hi, b.d0, b.d1, b.d2, b.d3});
    return grid(std::move(ns));
  }

 private:
  Profile(ProfileKind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {
    require_finite(lo, "domain lo");
    require_finite(hi, "domain hi");
    require(hi > lo, Errc::DomainTooSmall, "profile domain is empty");
  }

  double clamp_to_domain(double s) const {
    require_finite(s, "evaluation point");
    const double tol = 1e-12 * length();
    if (s < lo_) {
      require(lo_ - s <= tol, Errc::OutOfDomain,
              "s=" + std::to_string(s) + " below domain [" + std::to_string(lo_) + ", " +
                  std::to_string(hi_) + "]");
      return lo_;
    }
    if (s > hi_) {
      require(s - hi_ <= tol, Errc::OutOfDomain,
              "s=" + std::to_string(s) + " above domain [" + std::to_string(lo_) + ", " +
                  std::to_string(hi_) + "]");
      return hi_;
    }
    return s;
  }

  ProfileKind kind_;
  double lo_, hi_;
  std::array<double, 4> prm_{};
  std::vector<GridNode> nodes_;
  std::vector<detail::SegmentCoef> segs_;
};

// Max over interior sample points of |d1 - centered difference of d0|, with step
// 1e-4 * (domain length). Used as a health gate before verification runs.
inline double derivative_selfcheck(const Profile& p, int samples = 33) {
  require(samples >= 3, Errc::TooFewSamples, "selfcheck needs at least 3 samples");
  const double L = p.length();
  const double step = 1e-4 * L;
  double worst = 0;
  for (int i = 0; i < samples; ++i) {
    const double u = (i + 0.5) / samples;
    const double s = p.lo() + u * L;
    if (s - step < p.lo() || s + step > p.hi()) continue;
    const double fd = (p.value(s + step) - p.value(s - step)) / (2 * step);
    worst = std::max(worst, std::abs(p.eval(s).d1 - fd));
  }
  return worst;
}

// Columnar text format: optional '#' comment lines, then a header "s d0 d1 d2 d3",
// then one row per node with 17 significant digits.
inline void write_grid_text(std::ostream& os, const std::vector<GridNode>& nodes,
                            const std::vector<std::string>& comment_lines = {}) {
  for (const auto& c : comment_lines) os << "# " << c << "\n";
  os << "s d0 d1 d2 d3\n";
  char buf[512];
  for (const auto& n : nodes) {
    std::snprintf(buf, sizeof(buf), "%.17g %.17g %.17g %.17g %.17g\n", n.s, n.d0, n.d1,
                  n.d2, n.d3);
    os << buf;
  }
}

struct GridDocument {
  std::vector<GridNode> nodes;
  std::vector<std::string> comment_lines;  // without the leading '#'
};

inline GridDocument read_grid_text(std::istream& is) {
  GridDocument doc;
  std::string line;
  bool header_seen = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::size_t start = line.find_first_not_of("# \t");
      doc.comment_lines.push_back(start == std::string::npos ? "" : line.substr(start));
      continue;
    }
    if (!header_seen) {
      require(line.find("d0") != std::string::npos, Errc::ParseError,
              "grid text missing header row");
      header_seen = true;
      continue;
    }
    GridNode n;
    const char* ptr = line.c_str();
    char* end = nullptr;
    double* fields[5] = {&n.s, &n.d0, &n.d1, &n.d2, &n.d3};
    for (double* f : fields) {
      *f = std::strtod(ptr, &end);
      require(end != ptr, Errc::ParseError, "bad grid row: " + line);
      ptr = end;
    }
    doc.nodes.push_back(n);
  }
  require(header_seen, Errc::ParseError, "grid text has no header");
  require(doc.nodes.size() >= 2, Errc::ParseError, "grid text has fewer than 2 rows");
  return doc;
}

}  // namespace staticlab

#endif  // STATICLAB_PROFILE_HPP
