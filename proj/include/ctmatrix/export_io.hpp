#pragma once

#include <string>
#include <vector>

#include "ctmatrix/grid.hpp"
#include "ctmatrix/validation.hpp"

namespace ctm {

// Serializers.  All numeric fields are printed with %.17g so every double
// round-trips exactly; field order is fixed; no locale, no whitespace
// variation.  Identical inputs therefore produce identical bytes, which is
// the contract the CLI's repeat-run tests pin down.

// Grid table.  Header row:
//   k,k_prime,cos_theta,omega,eta,gamma,representation,value,abs_err_est,flags
// Failed rows keep their inputs and flags but leave value/abs_err_est empty.
// Quoting follows RFC 4180 (only applied when a field needs it).
std::string to_csv(const std::vector<GridRow>& rows);

// Same table as JSON: {"schema_version":1,"kind":"grid","rows":[...]}.
// Failed rows carry null value/abs_err_est.
std::string to_json(const std::vector<GridRow>& rows);

// Validation report flattened to one row per form audit and identity check.
std::string to_csv(const ValidationReport& report);

// Full validation report as canonical JSON.
std::string to_json(const ValidationReport& report);

// Write bytes to path ("-" means stdout).  Errors: io_failure.
void write_output(const std::string& path, const std::string& bytes);

} // namespace ctm
