#ifndef AGOF_SPECIAL_FUNCTIONS_HPP
#define AGOF_SPECIAL_FUNCTIONS_HPP

namespace agof::special {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;
inline constexpr double kLogSqrt2Pi = 0.91893853320467274178;

double normal_pdf(double z);
double normal_cdf(double z);
/// Upper tail 1 - Phi(z), accurate for large z.
double normal_sf(double z);

/// Inverse of the standard normal cdf on (0,1). Wichura's AS241 (PPND16),
/// relative accuracy about 1e-16.
double normal_quantile(double u);

/// E[(z - Z)^+] = integral of Phi over (-inf, z].
double normal_lower_partial_moment(double z);
/// E[(Z - z)^+] = integral of 1 - Phi over [z, inf).
double normal_upper_partial_moment(double z);

/// Regularized upper incomplete gamma Q(a, x) for a > 0, x >= 0.
double gamma_q(double a, double x);

}  // namespace agof::special

#endif  // AGOF_SPECIAL_FUNCTIONS_HPP
