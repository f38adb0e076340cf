#pragma once

namespace cocite {

// Standard normal CDF and survival function, accurate in both tails.
double normal_cdf(double z);
double normal_sf(double z);

// Inverse of normal_cdf for p in (0,1). Acklam's rational approximation
// polished with one Halley step; absolute error below 1e-14.
double normal_quantile(double p);

// Regularized incomplete gamma functions P(a,x) and Q(a,x) = 1 - P(a,x).
double gamma_p(double a, double x);
double gamma_q(double a, double x);

// Survival function of the chi-squared distribution with df degrees of
// freedom: P(X >= stat).
double chi2_sf(double stat, double df);

}  // namespace cocite
