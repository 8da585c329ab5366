#ifndef STATICLAB_MODELS_HPP
#define STATICLAB_MODELS_HPP

// Warped-product metric models on a 4-manifold with a distinguished radial
// coordinate s, in an adapted orthonormal frame E1 = d/ds, E2, E3, E4:
//
//   SingleWarp      g = ds^2 + h(s)^2 g_k          (3-d fiber of curvature k)
//   DoubleWarp      g = ds^2 + p(s)^2 dt^2 + h(s)^2 g_k   (2-d fiber)
//   SurfaceProduct  product of two constant-curvature surfaces, stored as a
//                   DoubleWarp with constant h
//   LineCrossW3     line times a warped 3-space, stored as a DoubleWarp with p == 1
//
// Curvature in closed form from the warp profiles, the radial Hessian of a
// potential f(s), and the principal logarithmic slopes (zeta values).

#include <array>
#include <cmath>
#include <optional>
#include <string>

#include "staticlab/common.hpp"
#include "staticlab/profile.hpp"

namespace staticlab {

enum class ModelClass { SingleWarp, DoubleWarp, SurfaceProduct, LineCrossW3 };

inline const char* model_class_name(ModelClass c) {
  switch (c) {
    case ModelClass::SingleWarp: return "single_warp";
    case ModelClass::DoubleWarp: return "double_warp";
    case ModelClass::SurfaceProduct: return "surface_product";
    case ModelClass::LineCrossW3: return "line_cross_w3";
  }
  return "unknown";
}

inline ModelClass model_class_from_name(const std::string& s) {
  if (s == "single_warp") return ModelClass::SingleWarp;
  if (s == "double_warp") return ModelClass::DoubleWarp;
  if (s == "surface_product") return ModelClass::SurfaceProduct;
  if (s == "line_cross_w3") return ModelClass::LineCrossW3;
  fail(Errc::ParseError, "unknown model class: " + s);
}

enum class PBranch { Cosh, Sinh, Exp };

struct WarpedModel {
  ModelClass cls = ModelClass::SingleWarp;
  Profile p;  // warp of the E2 direction; identically 1 for SingleWarp/LineCrossW3
  Profile h;  // warp of the fiber
  double fiber_k = 0;  // curvature of the unit fiber metric g_k
  std::optional<double> R_expected;

  double lo() const { return std::max(p.lo(), h.lo()); }
  double hi() const { return std::min(p.hi(), h.hi()); }
  bool two_warp() const { return cls != ModelClass::SingleWarp; }

  static WarpedModel single_warp(Profile h, double fiber_k,
                                 std::optional<double> R_expected = std::nullopt) {
    Profile one = Profile::constant(1.0, h.lo(), h.hi());
    return WarpedModel(ModelClass::SingleWarp, std::move(one), std::move(h), fiber_k,
                       R_expected);
  }

  static WarpedModel double_warp(Profile p, Profile h, double fiber_k,
                                 std::optional<double> R_expected = std::nullopt) {
    return WarpedModel(ModelClass::DoubleWarp, std::move(p), std::move(h), fiber_k,
                       R_expected);
  }

  // Product of a surface of curvature k1 (the (s, t) block, built from a solution of
  // p'' + k1 p = 0) and a surface of curvature k2 != 0 (stored as a constant-h warp
  // over a unit-curvature fiber: k2 = fiber_k / h^2).
  static WarpedModel surface_product(double k1, double k2, double lo, double hi,
                                     PBranch branch = PBranch::Cosh,
                                     std::optional<double> R_expected = std::nullopt) {
    require(k2 != 0, Errc::InvalidR, "second factor curvature must be nonzero");
    Profile p = Profile::constant(1.0, lo, hi);
    if (k1 > 0) {
      const double m = std::sqrt(k1);
      p = Profile::trig(1.0 / m, m, 0.0, 0.0, lo, hi);
    } else if (k1 < 0) {
      const double m = std::sqrt(-k1);
      switch (branch) {
        case PBranch::Cosh:
          p = Profile::hyperbolic(0.5 / m, 0.5 / m, m, 0.0, lo, hi);
          break;
        case PBranch::Sinh:
          p = Profile::hyperbolic(0.5 / m, -0.5 / m, m, 0.0, lo, hi);
          break;
        case PBranch::Exp:
          p = Profile::hyperbolic(1.0, 0.0, m, 0.0, lo, hi);
          break;
      }
    }
    const double habs = 1.0 / std::sqrt(std::abs(k2));
    return WarpedModel(ModelClass::SurfaceProduct, std::move(p),
                       Profile::constant(habs, lo, hi), (k2 > 0) ? 1.0 : -1.0,
                       R_expected);
  }

  static WarpedModel line_cross_w3(Profile h, double fiber_k,
                                   std::optional<double> R_expected = std::nullopt) {
    Profile one = Profile::constant(1.0, h.lo(), h.hi());
    return WarpedModel(ModelClass::LineCrossW3, std::move(one), std::move(h), fiber_k,
                       R_expected);
  }

  // Reassemble a model from serialized parts. The class-specific shape constraints
  // are re-checked because the parts may come from hand-written files.
  static WarpedModel from_parts(ModelClass cls, Profile p, Profile h, double fiber_k,
                                std::optional<double> R_expected = std::nullopt) {
    WarpedModel m(cls, std::move(p), std::move(h), fiber_k, R_expected);
    if (cls == ModelClass::SingleWarp || cls == ModelClass::LineCrossW3) {
      for (int i = 0; i <= 16; ++i) {
        const double s = m.lo() + (m.hi() - m.lo()) * i / 16.0;
        require(std::abs(m.p.value(s) - 1.0) <= 1e-12, Errc::WrongModelClass,
                "this model class fixes p == 1");
      }
    } else if (cls == ModelClass::SurfaceProduct) {
      const double h0 = m.h.value(m.lo());
      for (int i = 0; i <= 16; ++i) {
        const double s = m.lo() + (m.hi() - m.lo()) * i / 16.0;
        require(std::abs(m.h.value(s) - h0) <= 1e-12 * std::max(1.0, std::abs(h0)),
                Errc::WrongModelClass, "surface products fix h constant");
      }
    }
    return m;
  }

 private:
  WarpedModel(ModelClass c, Profile pp, Profile hh, double k, std::optional<double> R)
      : cls(c), p(std::move(pp)), h(std::move(hh)), fiber_k(k), R_expected(R) {
    validate();
  }

  void validate() const {
    require(hi() > lo(), Errc::EmptyDomainIntersection, "warp domains do not overlap");
    // Positivity of the warps over the common domain, checked on a dense probe grid.
    for (int i = 0; i <= 64; ++i) {
      const double s = lo() + (hi() - lo()) * i / 64.0;
      require(h.value(s) > 0, Errc::NonPositiveWarp,
              "h must stay positive on the domain (s=" + std::to_string(s) + ")");
      require(p.value(s) > 0, Errc::NonPositiveWarp,
              "p must stay positive on the domain (s=" + std::to_string(s) + ")");
    }
  }
};

struct Potential {
  Profile f;
  double x = 0;
  double y = 0;  // already evaluated at the model's scalar curvature
};

struct CurvatureSample {
  double s = 0;
  std::array<double, 4> ricci{};  // frame diagonal (E1..E4)
  double scalar = 0;
};

// Frame Ricci diagonal and scalar curvature from the warp profiles.
inline CurvatureSample ricci_closed_form(const WarpedModel& m, double s) {
  const ProfileValue h = m.h.eval(s);
  require(h.d0 > 0, Errc::NonPositiveWarp, "h(s) <= 0");
  CurvatureSample out;
  out.s = s;
  const double b = h.d1 / h.d0;
  const double hpp = h.d2 / h.d0;
  const double kh2 = m.fiber_k / (h.d0 * h.d0);
  if (m.two_warp()) {
    const ProfileValue p = m.p.eval(s);
    require(p.d0 > 0, Errc::NonPositiveWarp, "p(s) <= 0");
    const double a = p.d1 / p.d0;
    const double ppp = p.d2 / p.d0;
    out.ricci[0] = -ppp - 2.0 * hpp;
    out.ricci[1] = -ppp - 2.0 * a * b;
    out.ricci[2] = out.ricci[3] = -hpp - a * b - b * b + kh2;
  } else {
    out.ricci[0] = -3.0 * hpp;
    out.ricci[1] = out.ricci[2] = out.ricci[3] = -hpp - 2.0 * b * b + 2.0 * kh2;
  }
  out.scalar = out.ricci[0] + out.ricci[1] + out.ricci[2] + out.ricci[3];
  return out;
}

// Frame diagonal of the covariant Hessian of a radial potential f(s); the
// off-diagonal components vanish identically for radial functions.
inline std::array<double, 4> hessian_radial(const WarpedModel& m, const Profile& f,
                                            double s) {
  const ProfileValue fv = f.eval(s);
  const ProfileValue h = m.h.eval(s);
  require(h.d0 > 0, Errc::NonPositiveWarp, "h(s) <= 0");
  const double b = h.d1 / h.d0;
  std::array<double, 4> out{};
  out[0] = fv.d2;
  if (m.two_warp()) {
    const ProfileValue p = m.p.eval(s);
    require(p.d0 > 0, Errc::NonPositiveWarp, "p(s) <= 0");
    out[1] = (p.d1 / p.d0) * fv.d1;
  } else {
    out[1] = b * fv.d1;
  }
  out[2] = out[3] = b * fv.d1;
  return out;
}

// Principal logarithmic slopes (zeta_2, zeta_3, zeta_4) of the non-radial frame
// directions: (p'/p, h'/h, h'/h) for two-warp models, (h'/h, h'/h, h'/h) otherwise.
inline std::array<double, 3> zeta_values(const WarpedModel& m, double s) {
  const ProfileValue h = m.h.eval(s);
  require(h.d0 > 0, Errc::NonPositiveWarp, "h(s) <= 0");
  const double b = h.d1 / h.d0;
  if (m.two_warp()) {
    const ProfileValue p = m.p.eval(s);
    require(p.d0 > 0, Errc::NonPositiveWarp, "p(s) <= 0");
    return {p.d1 / p.d0, b, b};
  }
  return {b, b, b};
}

}  // namespace staticlab

#endif  // STATICLAB_MODELS_HPP
