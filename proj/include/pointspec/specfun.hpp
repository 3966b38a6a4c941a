#pragma once

namespace pointspec {

/// Validated nonnegative integer order for the modified Bessel routines.
/// Orders above kCap are rejected; the upward recurrences are only
/// error-audited up to there.
struct BesselOrder {
  static constexpr int kCap = 64;
  int l;
  explicit BesselOrder(int order);
};

/// I_l(z) for z >= 0. Throws std::range_error where e^z overflows the result.
double bessel_i(int l, double z);

/// e^{-z} I_l(z), overflow-safe for all z in [0, inf).
double bessel_i_scaled(int l, double z);

/// K_l(z) for z > 0. Throws std::range_error where the value leaves the
/// normal double range (use the scaled variant there).
double bessel_k(int l, double z);

/// e^{z} K_l(z), overflow-safe for large z.
double bessel_k_scaled(int l, double z);

/// I_l(z) K_l(z), evaluated from the scaled factors; stays finite down to
/// z -> 0+ for l >= 1 where the limit is 1/(2l).
double ik_product(int l, double z);

}  // namespace pointspec
