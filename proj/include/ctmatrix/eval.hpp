#pragma once

#include <string>

namespace ctm {

// The five ways this library computes the same transition-matrix element,
// plus the bare Born term.  Keeping them independent is the whole point:
// each route cross-checks the others.
enum class Representation {
    born,      // first Born term only
    series,    // partial-wave-free defining series over the sphere angle
    closed,    // explicit closed forms at the special strengths
    schwinger, // one-dimensional integral representation
    separated, // singularity-separated form built from auxiliary integrals
    rational,  // finite trigonometric sums for rational strengths
};

const char* representation_name(Representation rep);
bool parse_representation(const std::string& text, Representation& out);

// Row/result flags.  A flag never silently alters a value; it annotates how
// the value was obtained or why it is absent.
enum EvalFlag : unsigned {
    flag_none = 0u,
    flag_forward_singular = 1u << 0,       // omega = 0: no finite value
    flag_backward_limit = 1u << 1,         // omega = pi evaluated via the analytic limit
    flag_backward_indeterminate = 1u << 2, // omega = pi where this route has no finite form
    flag_pole_near = 1u << 3,              // |gamma + m| < 1e-6 for a positive integer m
    flag_rep_invalid = 1u << 4,            // representation undefined for this gamma
    flag_nonfinite = 1u << 5,              // computation produced NaN/inf
    flag_routed_rational = 1u << 6,        // closed form unavailable, fell back to rational
    flag_discrepant_form = 1u << 7,        // printed form failed validation; corrected value used
    flag_bound_state_pole = 1u << 8,       // gamma exactly at a negative integer
    flag_not_converged = 1u << 9,          // summation or quadrature tolerance unreached
};

std::string flags_to_string(unsigned flags); // ';'-joined tokens, "" when none

struct EvalResult {
    double value = 0.0;
    double abs_err_est = 0.0;
    Representation rep = Representation::series;
    unsigned flags = flag_none;
    long work = 0; // terms summed or integrand evaluations
};

} // namespace ctm
