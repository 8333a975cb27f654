#pragma once

namespace beircast::stats {

// Regularized incomplete gamma P(a, x) and Q(a, x) = 1 - P(a, x).
// Series expansion for x < a + 1, continued fraction otherwise; absolute
// accuracy ~1e-14 over the ranges used here.
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Regularized incomplete beta I_x(a, b) via Lentz's continued fraction.
double incomplete_beta(double a, double b, double x);

double normal_cdf(double z);
double normal_sf(double z);

// Upper tail probabilities.
double chi2_sf(double x, double dof);
double f_sf(double x, double dof1, double dof2);
double t_sf(double x, double dof); // P(T > x)

// P(Bin(n, 0.5) <= k), computed exactly in log space.
double binom_cdf_half(int k, int n);

} // namespace beircast::stats
