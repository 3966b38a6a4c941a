#pragma once

#include <optional>
#include <vector>

namespace pointspec {

/// Attractive shell: the measure is -gamma times arclength on the circle of
/// radius R in the plane.
struct CircleSpec {
  double radius;
  double gamma;
};

struct CircleLevel {
  int l;             // angular momentum
  double kappa;      // energy is -kappa^2
  double energy;
  int multiplicity;  // 1 for l = 0, 2 otherwise
};

struct CircleSpectrum {
  std::vector<CircleLevel> levels;  // ascending energy

  int total_multiplicity() const {
    int s = 0;
    for (const auto& lv : levels) s += lv.multiplicity;
    return s;
  }
};

/// Unique kappa > 0 with gamma R I_l(kappa R) K_l(kappa R) = 1, when it
/// exists: always for l = 0, and for l >= 1 iff gamma R / (2l) > 1.
std::optional<double> circle_eigenvalue(int l, const CircleSpec& spec);

/// Enumerates angular momenta until the existence condition fails.
/// Throws std::range_error when gamma R / 2 exceeds the Bessel order cap.
CircleSpectrum circle_spectrum(const CircleSpec& spec);

/// Independent check on circle_eigenvalue: integrates the radial equation
/// outward from r ~ 0 and inward from r >> R and returns the normalized
/// mismatch of the derivative jump u'(R+) - u'(R-) + gamma u(R) at the shell;
/// near zero iff kappa is an eigenvalue.
double radial_defect(int l, const CircleSpec& spec, double kappa);

}  // namespace pointspec
