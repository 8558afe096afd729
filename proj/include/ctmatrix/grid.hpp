#pragma once

#include <string>
#include <vector>

#include "ctmatrix/dispatch.hpp"
#include "ctmatrix/eval.hpp"
#include "ctmatrix/kinematics.hpp"

namespace ctm {

// A rectangular evaluation request: the cartesian product of the momentum
// and angle lists, evaluated through each requested representation.
struct GridSpec {
  std::vector<double> k_list;
  std::vector<double> kp_list;
  std::vector<double> cos_list;
  std::vector<Representation> reps;
  EvalOptions options;
  int threads = 1; // worker count; the output is identical for any value
};

// One output row.  `value` and `abs_err_est` are NaN when the point failed
// (the failure is then named in `flags`), so a partial grid is still a
// complete table.
struct GridRow {
  double k = 0.0, k_prime = 0.0, cos_theta = 0.0;
  double omega = 0.0, eta = 0.0, gamma = 0.0;
  Representation rep = Representation::born;
  double value = 0.0, abs_err_est = 0.0;
  unsigned flags = 0;
  std::string error; // errc name when evaluation threw, empty otherwise
};

// Evaluate the full product grid.  Row order is fixed: k outermost, then
// k', then cos, then representation, regardless of thread count.  Rows are
// computed with a static block partition so the bytes of the exported table
// never depend on scheduling.
std::vector<GridRow> run_grid(const EnergyState& st, const GridSpec& spec);

} // namespace ctm
