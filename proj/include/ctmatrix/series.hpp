#pragma once

#include <optional>

#include "ctmatrix/eval.hpp"
#include "ctmatrix/kinematics.hpp"

namespace ctm {

// How the Fock-angle sum is evaluated.
//
//   none                fixed decomposition: the slowly converging parts are
//                       peeled off into closed forms, leaving a remainder
//                       that falls off like 1/n^4.  This is the production
//                       path and the default.
//   direct_partial_sums raw partial sums of sin(n w)/(n + g) with an
//                       oscillation-envelope error bound.  Converges like
//                       1/N, so it cannot reach tight tolerances; used as a
//                       cross-check and to demonstrate why the decomposition
//                       exists.
//   averaged_tail       raw terms plus repeated pairwise averaging of a
//                       window of partial sums.  Independent of the
//                       decomposition's closed forms, so it serves as an
//                       internal oracle.
enum class Acceleration { none, direct_partial_sums, averaged_tail };

struct SeriesOptions {
  double target_rel_tol = 1e-10; // relative to max(|S|, 1e-3 * |sin w|)
  long   max_terms      = 1'000'000;
  Acceleration acceleration = Acceleration::none;
};

// Outcome of a truncated sum: value, a conservative absolute error bound,
// and how many terms were consumed.
struct SumResult {
  double value   = 0.0;
  double abs_err = 0.0;
  long   terms   = 0;
  bool   converged = false;
};

// S(g, w) = sum_{n>=1} sin(n w)/(n + g) for w in (0, pi], g > -1 or any
// non-pole g.  Throws bound_state_pole when g is a negative integer and
// convergence_failure when the requested accuracy cannot be certified
// within max_terms.
SumResult fock_sum(double gamma, double omega, const SeriesOptions& opts = {});

// Closed form of S at g = +1/2 (sign = +1) and g = -1/2 (sign = -1):
//   S = (pi/2) cos(w/2) +- sin(w/2) ln|tan(w/4)|
double half_integer_sum(int sign, double omega);

// A rational coupling value g = sign * n / m in lowest terms.
struct RationalGamma {
  int  sign = 1; // +1 or -1
  long num  = 1; // n >= 1
  long den  = 1; // m >= 1, gcd(n, m) == 1

  double value() const { return sign * static_cast<double>(num) / static_cast<double>(den); }

  // Recognize a double as a rational with denominator <= max_den, within a
  // tight absolute tolerance (1e-9).  Zero is rejected; negative integers
  // are recognized so that callers can raise the bound-state-pole error.
  static std::optional<RationalGamma> from_real(double gamma, long max_den = 64);
};

// Which logarithm argument the rational closed form uses.  The two variants
// differ by a constant shift per root-of-unity channel; only `half_angle`
// (ln 2|sin(theta/2)|) reproduces the sum.  `full_angle` (ln 2|sin theta|)
// is kept so the validation report can show the discrepancy explicitly.
enum class RationalLogVariant { half_angle, full_angle };

// Finite closed form of S(g, w) for rational g = +-n/m that is not a
// negative integer.  Exact up to rounding; the abs_err field reflects only
// evaluation rounding, and terms counts the finite pieces summed.
SumResult rational_sum(const RationalGamma& rg, double omega,
                       RationalLogVariant variant = RationalLogVariant::half_angle);

// Transition matrix via the angle sum.  Handles the forward (w -> 0) wall
// by failing with forward_singularity at w == 0, and the backward point
// w == pi through the alternating-sum limit (flag_backward_limit is set).
EvalResult tmatrix_series(const EnergyState& st, const FockPoint& pt,
                          const SeriesOptions& opts = {});

// The bracketed angular factor B(g, w) = 1/sin^2(w/2) - (4 g / sin w) S(g, w)
// with the same limit handling; the full matrix element is prefactor * B.
// Exposed separately because every representation reduces to this factor.
EvalResult bracket_series(double gamma, double omega, const SeriesOptions& opts = {});

} // namespace ctm
