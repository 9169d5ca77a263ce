#pragma once

namespace dyad::dist {

// Regularized incomplete beta I_x(a, b).
double ibeta(double a, double b, double x);

double normal_cdf(double z);

// Student-t CDF and upper-tail quantile with df degrees of freedom.
double student_t_cdf(double t, double df);
double student_t_quantile(double p, double df);

// F distribution CDF with (d1, d2) degrees of freedom.
double f_cdf(double f, double d1, double d2);

}  // namespace dyad::dist
