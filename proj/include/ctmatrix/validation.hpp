#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ctmatrix/closed_forms.hpp"

namespace ctm {

// One cross-route comparison.  `kind` separates the two failure meanings:
//   internal - two independent numeric routes of this library disagree; a
//              failure here is a bug, never a finding (exit code 3)
//   printed  - a transcribed analytic expression is audited against the
//              numeric reference; a failure is a recorded discrepancy in
//              the source expression (exit code 1)
struct IdentityCheck {
  std::string name;
  std::string kind;        // "internal" or "printed"
  bool        passed = false;
  double      max_rel_dev = 0.0;
  double      tolerance = 0.0;
  std::string location;    // where the worst deviation occurred
};

// One explicit-form audit row.  `status` is CONFIRMED when the verbatim
// transcription tracks the series reference within the audit tolerance,
// DISCREPANT otherwise; a DISCREPANT form is usable only because a
// corrected expression was validated in its place.
struct FormAudit {
  std::string name;        // e.g. "half_plus"
  double      coupling = 0.0;
  std::string status;                  // "CONFIRMED" or "DISCREPANT"
  double      max_rel_dev_verbatim = 0.0;
  double      argmax_omega = 0.0;
  std::string corrected_status;        // audit of the corrected expression
  double      max_rel_dev_corrected = 0.0;
  double      cost_ratio = 0.0;        // series work units per closed-form term
};

// Complete audit of the library against itself and against the transcribed
// expressions.  Fully deterministic: every field, including cost ratios, is
// derived from counted work, never from wall time, so the serialized report
// is byte-identical across runs and machines.
struct ValidationReport {
  int    schema_version = 1;
  double form_tolerance = 0.0;  // audit threshold for the explicit forms
  int    grid_points = 0;       // standard angle grid used by the sweeps
  double grid_omega_min = 0.0;
  double grid_omega_max = 0.0;

  std::vector<FormAudit>     forms;
  std::vector<IdentityCheck> identities;

  // Ambiguous constructions in the source expressions and which reading the
  // numeric evidence selected (name -> selected variant).
  std::vector<std::pair<std::string, std::string>> selections;

  // Public operations exercised by this run (operation -> touched).
  std::vector<std::pair<std::string, bool>> coverage;

  std::string status;    // "all_confirmed" | "discrepancies_found" | "internal_failure"
  int         exit_code = 0; // 0, 1, or 3 respectively
};

// Run the full audit.  `form_tolerance` gates the explicit-form statuses
// (>= 1e-12 required); the cross-route identity checks each carry their own
// fixed documented tolerance and are not affected by it.
ValidationReport run_validation(double form_tolerance = 1e-8);

} // namespace ctm
