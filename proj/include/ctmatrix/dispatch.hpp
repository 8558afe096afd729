#pragma once

#include "ctmatrix/closed_forms.hpp"
#include "ctmatrix/eval.hpp"
#include "ctmatrix/kinematics.hpp"
#include "ctmatrix/quadrature.hpp"
#include "ctmatrix/series.hpp"

namespace ctm {

// Evaluation knobs shared across representations.
struct EvalOptions {
  SeriesOptions series;
  QuadOptions   quad;
};

// Single entry point: evaluate the matrix element at one kinematic point
// through the chosen representation.  `born` returns the plain momentum
// transfer pole term; the others return the full off-shell element.
EvalResult evaluate(Representation rep, const EnergyState& st,
                    const FockPoint& pt, const EvalOptions& opts = {});

// Same but for the bare angular bracket B(g, w) (no kinematic prefactor).
// `born` yields just the leading 1/sin^2(w/2) pole term.
EvalResult evaluate_bracket(Representation rep, double gamma, double omega,
                            const EvalOptions& opts = {});

} // namespace ctm
