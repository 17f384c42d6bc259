#pragma once

// Special functions for the F-test, implemented in-tree so results are
// bit-reproducible across platforms and library versions.

namespace aiir {

// Natural log of the gamma function for x > 0 (Lanczos approximation, g=7,
// 9 coefficients).
double log_gamma(double x);

// Regularized incomplete beta function I_x(a, b) for a,b > 0 and x in [0,1],
// evaluated by the Lentz continued fraction with convergence epsilon 1e-14
// and an iteration cap of 300, switching to the symmetric form
// 1 - I_{1-x}(b, a) when x >= (a+1)/(a+b+2).
double regularized_incomplete_beta(double a, double b, double x);

// Upper-tail probability P(F >= f) for the F distribution with df1 and df2
// degrees of freedom: I_x(df2/2, df1/2) at x = df2/(df2 + df1*f).
// Throws std::invalid_argument for df < 1 or f < 0 / non-finite.
double f_p_value(double f, int df1, int df2);

} // namespace aiir
