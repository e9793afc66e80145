#pragma once

namespace ambivox::special {

/// Regularized incomplete beta I_x(a, b) by continued fraction (modified
/// Lentz), absolute error below 1e-10. Requires a, b > 0 and x in [0, 1].
double incomplete_beta(double x, double a, double b);

/// Upper-tail probability P(F > f) for an F(d1, d2) variate.
double f_survival(double f, double d1, double d2);

/// Two-sided p-value of Student's t with `df` degrees of freedom.
double t_two_sided(double t, double df);

double normal_cdf(double z);

/// Studentized range CDF P(Q < q) for k means and df error degrees of
/// freedom, by nested Gauss-Legendre quadrature. Absolute error below 1e-4.
/// df may be +infinity.
double ptukey(double q, int k, double df);

/// Inverse of ptukey in q.
double qtukey(double p, int k, double df);

}  // namespace ambivox::special
