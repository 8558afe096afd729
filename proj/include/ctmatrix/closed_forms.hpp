#pragma once

#include <string>
#include <vector>

#include "ctmatrix/eval.hpp"
#include "ctmatrix/kinematics.hpp"
#include "ctmatrix/quadrature.hpp"
#include "ctmatrix/series.hpp"

namespace ctm {

// The coupling values for which a dedicated explicit bracket expression is
// carried, as transcribed from the source material and, where that
// transcription is defective, in a corrected form derived from the general
// rational reduction.
enum class ExplicitForm {
  half,          // g = +-1/2
  three_halves,  // g = +-3/2
  five_halves,   // g = +-5/2
  seven_halves,  // g = +-7/2
  one_third,     // g = +-1/3
  one_quarter,   // g = +-1/4
};

const char* explicit_form_name(ExplicitForm f);

// verbatim  - the expression exactly as transcribed, defects included
// corrected - the repaired expression (identical when nothing was wrong)
enum class Fidelity { verbatim, corrected };

// Bracket B(g, w) for one explicit form at the given sign of g.
// `sign` is +1 for the positive coupling of the pair, -1 for the negative.
// At w == pi every expression here is a compensated 0/0; the value returned
// is the analytic limit, which is legitimate exactly when the expression is
// known to equal the series bracket -- so the limit is served for corrected
// fidelity and for verbatim forms that passed validation, while a verbatim
// form that failed validation throws backward_indeterminate there.
// Throws forward_singularity at w == 0.
double bracket_explicit(ExplicitForm f, int sign, double omega,
                        Fidelity fidelity = Fidelity::verbatim);

// Outcome of sweeping one explicit form against the angle-sum reference on
// a fixed interior angle grid.  A form is discrepant when its verbatim
// transcription disagrees beyond tolerance; max_rel_dev records how badly
// and at which angle.
struct FormStatus {
  ExplicitForm form;
  int    sign = 1;              // +1 or -1
  bool   discrepant = false;    // verbatim vs reference beyond 1e-8
  double max_rel_dev_verbatim  = 0.0;
  double max_rel_dev_corrected = 0.0;
  double argmax_omega = 0.0;    // angle of the worst verbatim deviation
};

// Sweep all explicit forms (both signs) against the angle-sum reference on
// the standard 50-point interior angle grid.  Results are computed once and
// cached for the lifetime of the process.
const std::vector<FormStatus>& all_form_statuses();

// Transition matrix at g = +-1/2 through the corrected explicit bracket.
EvalResult tmatrix_half(const EnergyState& st, const FockPoint& pt);

// Transition matrix through one explicit form.  The state's gamma must be
// +- the form's coupling value (out_of_range otherwise).  Defaults to the
// verbatim transcription; results from a form whose verbatim transcription
// failed validation carry flag_discrepant_form.
EvalResult tmatrix_explicit(ExplicitForm f, const EnergyState& st, const FockPoint& pt,
                            Fidelity fidelity = Fidelity::verbatim);

// Transition matrix through the finite rational reduction of the angle sum.
// Requires g to be recognizable as a rational with a small denominator
// (out_of_range otherwise, bound_state_pole on negative integers).
EvalResult tmatrix_rational(const EnergyState& st, const FockPoint& pt);

// Transition matrix through whichever closed expression covers this
// coupling: the corrected explicit form when one exists for g, otherwise
// the rational reduction.  flag_routed_rational marks the fallback.
EvalResult tmatrix_closed(const EnergyState& st, const FockPoint& pt);

double bracket_closed(double gamma, double omega, unsigned* flags_out = nullptr);

// The auxiliary angular integrals feeding the separated representation,
// bundled with the derived constant:
//   x_g(w) = int_0^w  sin(g phi) cot(phi/2) d phi
//   y_g(w) = int_w^pi sin(g phi) ln|sin(phi/2)| d phi
//   c(g)   = (1/2)(1 - x_g(pi)/pi)
// Requires |g| <= 4 (beyond that the oscillatory integrands need treatment
// this library does not carry) and w in [0, pi].
struct SingularitySeparatedAux {
  double x_gamma = 0.0;
  double y_gamma = 0.0;
  double c_gamma = 0.0;
};

SingularitySeparatedAux aux_integrals(double gamma, double omega,
                                      const QuadOptions& opts = {});

// Transition matrix through the separated representation, which splits the
// angle sum S into boundary terms plus the two auxiliary integrals:
//   S = (pi/2) cos(g w) + (1/2) sin(2 g w) ln|sin(w/2)|
//       - pi c(g) cot(pi g) sin(g w) - (1/2) cos(g w) x_g(w)
//       - g sin(g w) y_g(w)
// Throws degenerate_gamma when g is within 1e-9 of a nonzero integer (the
// cot(pi g) factor blows up while c(g) vanishes; the limit exists but is
// not taken here) and backward_indeterminate at w == pi.  Requires |g| <= 4
// as for aux_integrals.
EvalResult tmatrix_separated(const EnergyState& st, const FockPoint& pt,
                             const QuadOptions& opts = {});

double bracket_separated(double gamma, double omega, const QuadOptions& opts = {});

} // namespace ctm
