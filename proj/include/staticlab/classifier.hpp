#ifndef STATICLAB_CLASSIFIER_HPP
#define STATICLAB_CLASSIFIER_HPP

// Spectral classification of warped models. The Ricci endomorphism of every model
// here is diagonal in the adapted frame with eigenvalues (lambda_1, ..., lambda_4)
// depending on s only; the multiplicity pattern of the fiber trio {lambda_2, lambda_3,
// lambda_4}, together with the sign of the scalar curvature and the (x, y) constraint
// flags, decides the family:
//
//   I    fiber pair split, R > 0, h constant   (product of two positive surfaces)
//   II   fiber pair split, R < 0, h constant   (product of two negative surfaces)
//   III  fiber pair split, R = 0, p constant   (line cross warped 3-space)
//   IV   fiber trio equal                      (warped product over a 3-d fiber)
//   V    everything zero                       (Ricci-flat)
//
// A fiber trio that is pairwise distinct is structurally inconsistent for nonconstant
// potentials and is reported with a diagnostic instead of a type.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "staticlab/common.hpp"
#include "staticlab/models.hpp"
#include "staticlab/verifier.hpp"

namespace staticlab {

struct EigenProfile {
  // (s, lambda_1, lambda_2, lambda_3, lambda_4), ordered in s; lambda_1 belongs to
  // the radial direction.
  std::vector<std::array<double, 5>> samples;
  double cluster_tol = 1e-6;
};

inline EigenProfile eigen_profile_closed_form(const WarpedModel& m, int count = 65) {
  require(count >= 3, Errc::TooFewSamples, "need at least 3 eigenvalue samples");
  EigenProfile ep;
  ep.samples.reserve(static_cast<std::size_t>(count));
  const double lo = m.lo(), hi = m.hi();
  for (int i = 0; i < count; ++i) {
    const double u = std::cos(M_PI * i / (count - 1));
    const double s = 0.5 * (lo + hi) - 0.5 * (hi - lo) * u;
    const auto c = ricci_closed_form(m, s);
    ep.samples.push_back({s, c.ricci[0], c.ricci[1], c.ricci[2], c.ricci[3]});
  }
  std::sort(ep.samples.begin(), ep.samples.end(),
            [](const auto& a, const auto& b) { return a[0] < b[0]; });
  return ep;
}

enum class SpectralSignature { AllEqual, TwoEqualAmongFiber, PairwiseDistinctFiber, Degenerate };

inline const char* spectral_signature_name(SpectralSignature s) {
  switch (s) {
    case SpectralSignature::AllEqual: return "AllEqual";
    case SpectralSignature::TwoEqualAmongFiber: return "TwoEqualAmongFiber";
    case SpectralSignature::PairwiseDistinctFiber: return "PairwiseDistinctFiber";
    case SpectralSignature::Degenerate: return "Degenerate";
  }
  return "unknown";
}

enum class FamilyType { I, II, III, IV, V, Unclassified };

inline const char* family_type_name(FamilyType t) {
  switch (t) {
    case FamilyType::I: return "I";
    case FamilyType::II: return "II";
    case FamilyType::III: return "III";
    case FamilyType::IV: return "IV";
    case FamilyType::V: return "V";
    case FamilyType::Unclassified: return "Unclassified";
  }
  return "unknown";
}

inline FamilyType family_type_from_name(const std::string& s) {
  if (s == "I") return FamilyType::I;
  if (s == "II") return FamilyType::II;
  if (s == "III") return FamilyType::III;
  if (s == "IV") return FamilyType::IV;
  if (s == "V") return FamilyType::V;
  return FamilyType::Unclassified;
}

struct SpectralPattern {
  SpectralSignature signature = SpectralSignature::Degenerate;
  FamilyType type = FamilyType::Unclassified;
  std::vector<std::string> diagnostics;
};

namespace detail {

// Multiplicity pattern of the fiber trio at one sample, with a relative gap tolerance.
inline SpectralSignature fiber_signature(double l2, double l3, double l4, double tol) {
  const double scale =
      std::max(1.0, std::max(std::abs(l2), std::max(std::abs(l3), std::abs(l4))));
  const double gap = tol * scale;
  const bool e23 = std::abs(l2 - l3) <= gap;
  const bool e34 = std::abs(l3 - l4) <= gap;
  const bool e24 = std::abs(l2 - l4) <= gap;
  const int eq = int(e23) + int(e34) + int(e24);
  if (eq >= 2) return SpectralSignature::AllEqual;
  if (eq == 0) return SpectralSignature::PairwiseDistinctFiber;
  // Exactly one coincidence. The adapted frame only produces lambda_3 = lambda_4; any
  // other arrangement means the sampled data does not fit the ansatz.
  if (e34) return SpectralSignature::TwoEqualAmongFiber;
  return SpectralSignature::Degenerate;
}

}  // namespace detail

inline SpectralPattern eigen_multiplicity(const EigenProfile& ep) {
  require(ep.samples.size() >= 3, Errc::TooFewSamples,
          "need at least 3 eigenvalue samples");
  require(ep.cluster_tol > 0, Errc::InvalidTolerance, "cluster_tol must be positive");
  SpectralPattern out;
  bool first = true;
  for (const auto& row : ep.samples) {
    const auto sig = detail::fiber_signature(row[2], row[3], row[4], ep.cluster_tol);
    if (first) {
      out.signature = sig;
      first = false;
    } else if (sig != out.signature) {
      out.signature = SpectralSignature::Degenerate;
      out.diagnostics.push_back("multiplicity pattern changes along s");
      break;
    }
  }
  return out;
}

struct ObstructionValues {
  double P = 0;
  double A = 0;
  double gamma_product = 0;       // (a-b)(a-c)(b-c)^2 / (4P)
  double fprime_over_f_rhs = 0;   // -A / (2P), the potential-independent factor
  bool p_zero_division = false;   // P vanished; the quotients above are not defined
};

inline ObstructionValues obstruction_values(double a, double b, double c) {
  ObstructionValues v;
  v.P = a * a + b * b + c * c - a * b - b * c - a * c;
  v.A = 6 * a * b * c - a * a * b - a * b * b - a * a * c - a * c * c - b * b * c -
        b * c * c;
  if (v.P > 0) {
    v.gamma_product = (a - b) * (a - c) * (b - c) * (b - c) / (4 * v.P);
    v.fprime_over_f_rhs = -v.A / (2 * v.P);
  } else {
    v.p_zero_division = true;
  }
  return v;
}

struct ClassifierVerdict {
  SpectralPattern pattern;
  double R = 0;
  std::array<double, 2> P_range{0, 0};
  std::array<double, 2> A_range{0, 0};
  ConstraintFlags constraint_flags;
};

namespace detail {

inline bool profile_constant(const Profile& pr, double lo, double hi) {
  double vmin = 0, vmax = 0;
  for (int i = 0; i <= 32; ++i) {
    const double v = pr.value(lo + (hi - lo) * i / 32.0);
    if (i == 0) {
      vmin = vmax = v;
    } else {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    }
  }
  return vmax - vmin <= 1e-9 * std::max(1.0, std::abs(vmax));
}

inline bool potential_constant(const Profile& f) {
  double dmax = 0;
  for (int i = 0; i <= 32; ++i) {
    const double s = f.lo() + (f.hi() - f.lo()) * i / 32.0;
    dmax = std::max(dmax, std::abs(f.eval(s).d1));
  }
  return dmax <= 1e-10;
}

}  // namespace detail

// Decision table over the sampled spectrum. The declared model class is never
// consulted; structure is inferred from the eigenvalues and the profile values, so
// negative controls (mislabeled models) classify by what they are.
inline ClassifierVerdict classify_theorem1(const WarpedModel& m, const Potential& pot,
                                           const EigenProfile& ep) {
  ClassifierVerdict v;
  v.pattern = eigen_multiplicity(ep);

  // Scalar curvature from the sampled eigenvalues.
  double rmin = 0, rmax = 0;
  bool first = true;
  double zero_scale = 0;
  for (const auto& row : ep.samples) {
    const double r = row[1] + row[2] + row[3] + row[4];
    if (first) {
      rmin = rmax = r;
      first = false;
    } else {
      rmin = std::min(rmin, r);
      rmax = std::max(rmax, r);
    }
    for (int i = 1; i <= 4; ++i) zero_scale = std::max(zero_scale, std::abs(row[i]));
  }
  v.R = 0.5 * (rmin + rmax);
  if (rmax - rmin > 1e-8 * std::max(1.0, std::abs(v.R)))
    v.pattern.diagnostics.push_back("scalar curvature varies along s");
  v.constraint_flags = constraint_flags_for(v.R, pot.x, pot.y);

  const double lo = m.lo(), hi = m.hi();
  double Pmin = 0, Pmax = 0, Amin = 0, Amax = 0;
  first = true;
  for (const auto& row : ep.samples) {
    const auto z = zeta_values(m, row[0]);
    const auto obs = obstruction_values(z[0], z[1], z[2]);
    if (first) {
      Pmin = Pmax = obs.P;
      Amin = Amax = obs.A;
      first = false;
    } else {
      Pmin = std::min(Pmin, obs.P);
      Pmax = std::max(Pmax, obs.P);
      Amin = std::min(Amin, obs.A);
      Amax = std::max(Amax, obs.A);
    }
  }
  v.P_range = {Pmin, Pmax};
  v.A_range = {Amin, Amax};

  const double rtol = 1e-9 * std::max(1.0, zero_scale);
  switch (v.pattern.signature) {
    case SpectralSignature::AllEqual: {
      const bool ricci_zero = zero_scale < 1e-9;
      v.pattern.type = ricci_zero ? FamilyType::V : FamilyType::IV;
      break;
    }
    case SpectralSignature::TwoEqualAmongFiber: {
      const bool h_const = detail::profile_constant(m.h, lo, hi);
      const bool p_const = detail::profile_constant(m.p, lo, hi);
      if (v.R > rtol && h_const && v.constraint_flags.xR3_plus_y_zero) {
        v.pattern.type = FamilyType::I;
      } else if (v.R < -rtol && h_const && v.constraint_flags.xR3_plus_y_zero) {
        v.pattern.type = FamilyType::II;
      } else if (std::abs(v.R) <= std::max(rtol, 1e-9) && p_const &&
                 v.constraint_flags.y0_zero) {
        v.pattern.type = FamilyType::III;
      } else {
        v.pattern.type = FamilyType::Unclassified;
        v.pattern.diagnostics.push_back(
            "two-equal pattern without a matching constraint set");
      }
      break;
    }
    case SpectralSignature::PairwiseDistinctFiber: {
      v.pattern.type = FamilyType::Unclassified;
      if (!detail::potential_constant(pot.f))
        v.pattern.diagnostics.push_back("distinct_fiber_conflict");
      break;
    }
    case SpectralSignature::Degenerate: {
      v.pattern.type = FamilyType::Unclassified;
      break;
    }
  }
  return v;
}

}  // namespace staticlab

#endif  // STATICLAB_CLASSIFIER_HPP
