#pragma once

namespace avw::numerics {

/// Standard normal distribution function. Saturates to 0/1 in the tails.
double std_normal_cdf(double x);

/// Upper tail 1 - cdf(x), computed without cancellation.
double std_normal_sf(double x);

/// Inverse of std_normal_cdf on (0, 1).
///
/// Acklam's rational approximation (relative error ~1.2e-9) followed by a
/// single Halley step on the erfc-based cdf, which brings the result to within
/// a few ulp of the true quantile for p in [1e-300, 1 - 1e-16].
/// Throws std::domain_error for p outside (0, 1).
double std_normal_quantile(double p);

/// Regularized incomplete beta function I_x(a, b) via the Lentz continued
/// fraction. Requires a > 0, b > 0, 0 <= x <= 1.
double regularized_incomplete_beta(double a, double b, double x);

/// Distribution function of Fisher's F(d1, d2) at x >= 0.
double f_cdf(double x, double d1, double d2);

/// Survival function 1 - f_cdf, evaluated through the complementary beta to
/// keep small p-values accurate.
double f_sf(double x, double d1, double d2);

}  // namespace avw::numerics
