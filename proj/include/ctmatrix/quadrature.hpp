#pragma once

#include <functional>

#include "ctmatrix/eval.hpp"
#include "ctmatrix/kinematics.hpp"

namespace ctm {

struct QuadOptions {
  double target_rel_tol = 1e-11;
  double target_abs_tol = 1e-14;
  int    max_depth      = 40;     // recursion depth per panel split
  long   max_evals      = 500'000;
};

struct QuadResult {
  double value   = 0.0;
  double abs_err = 0.0;
  long   evals   = 0;
  bool   converged = false;
};

// Adaptive Gauss-Kronrod 15(7) on [a, b].  The panel with the largest error
// estimate is bisected first (ties broken toward the leftmost panel), which
// keeps endpoint power singularities affordable where a proportional
// per-panel budget would stall.  Deterministic: panel selection is a total
// order and the final sum is accumulated over panels in left-to-right
// position order, so the result never depends on scheduling.
QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     const QuadOptions& opts = {});

// Same, for integrands with an integrable logarithmic endpoint singularity
// at `a` (like ln|sin(phi/2)| near 0): substitutes phi = a + e^{-u} scaled
// onto the panel so the log becomes analytic in the new variable.
QuadResult integrate_log_endpoint(const std::function<double(double)>& f,
                                  double a, double b, const QuadOptions& opts = {});

// I(g, w) = int_0^1 rho^g / (rho^2 - 2 rho cos w + 1) d rho.
//
// Requires g > -1: the rho^g weight is otherwise non-integrable at rho = 0
// (non_integrable).  For g in (-1, 0) the weight is absorbed by the
// substitution rho = u^{1/(1+g)}, which makes the integrand bounded.  The
// near-forward peak at rho = 1 (height ~1/w^2, width ~w) is isolated by
// splitting the interval at 1 - 2 w.
// Satisfies I(g, w) sin w = sum_{n>=1} sin(n w)/(n + g), the bridge used to
// cross-validate this route against the series route.
QuadResult schwinger_integral(double gamma, double omega,
                              const QuadOptions& opts = {});

// Transition matrix via the kernel integral:
//   B(g, w) = 1/sin^2(w/2) - 4 g I(g, w)
// Valid on the whole interval w in (0, pi]; this is the only representation
// that is regular at w = pi without a special-case limit.
// Errors: attractive_out_of_range for g <= -1 (with guidance to use the
// series route, which has no such restriction away from the poles).
EvalResult tmatrix_schwinger(const EnergyState& st, const FockPoint& pt,
                             const QuadOptions& opts = {});

EvalResult bracket_schwinger(double gamma, double omega,
                             const QuadOptions& opts = {});

// Partial-wave projection of the matrix element at fixed (k, k'):
//   t_l = (1/2) int_{-1}^{1} P_l(x) T(k, k', x) dx
// computed in the sphere-angle variable, where the forward Born peak is
// widest, with the exact Jacobian of the angle map.  `rep` selects which
// route supplies T; `born` projects just the potential term (closed form
// available for l = 0, used as an oracle).
// Errors: on_shell_diagonal when k == k' (the forward endpoint then sits at
// w = 0 where T diverges non-integrably in cos theta); out_of_range for
// l < 0 or l > 20.
QuadResult project_partial_wave(const EnergyState& st, double k, double k_prime,
                                int l, Representation rep = Representation::series,
                                const QuadOptions& opts = {});

// Auxiliary angular integrals used by the separated representation:
//   x_g(w) = int_0^w  sin(g phi) cot(phi/2) d phi
//   y_g(w) = int_w^pi sin(g phi) ln|sin(phi/2)| d phi
//   c(g)   = (1/2) (1 - x_g(pi)/pi)
double aux_cot_integral(double gamma, double omega, const QuadOptions& opts = {});
double aux_log_integral(double gamma, double omega, const QuadOptions& opts = {});
double aux_weight(double gamma, const QuadOptions& opts = {});

} // namespace ctm
