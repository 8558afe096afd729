#pragma once

namespace ctm {

// Closed forms and near-closed forms for the elementary sums the series
// module leans on.  All take the sphere angle theta in [0, pi] (the sums are
// 2 pi periodic and odd; we only ever need this window).

// sum_{n>=1} sin(n t)/n   = (pi - t)/2                        (t in (0, 2 pi))
double sin_over_n(double theta);

// sum_{n>=1} sin(n t)/n^2  (Clausen's integral).  Power series about 0 with
// zeta(2m) coefficients; max abs error ~2e-16 over [0, pi].
double sin_over_n2(double theta);

// sum_{n>=1} sin(n t)/n^3 = t(pi^2/6 - pi t/4 + t^2/12)
double sin_over_n3(double theta);

// A(g) = sum_{n>=1} (-1)^(n-1)/(n + g), g not a negative integer.
// Used for the omega = pi limit of the transition matrix.
double alternating_shifted_sum(double gamma);

// Legendre polynomial by the standard three-term upward recurrence.
// Requires 0 <= l <= 64 and |x| <= 1.
double legendre_p(int l, double x);

// True when gamma sits exactly on a negative integer (the bound-state poles).
bool is_negative_integer(double gamma);

// True when |gamma + m| < 1e-6 for some positive integer m (pole proximity).
bool near_negative_integer(double gamma);

} // namespace ctm
