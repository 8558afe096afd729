#pragma once

#include <stdexcept>
#include <string>

namespace ctm {

// Every failure mode the library reports.  Values are stable: the CLI maps
// them to process exit codes and the grid runner maps a subset to row flags.
enum class errc {
    non_negative_energy,    // bound-state kinematics need E < 0
    out_of_range,           // argument outside the documented domain
    forward_singularity,    // omega = 0: the transition matrix has a true pole
    backward_indeterminate, // omega = pi where a representation's terms are 0/0
    bound_state_pole,       // gamma at a negative integer
    convergence_failure,    // summation tolerance unreached within max_terms
    quadrature_failure,     // adaptive integration tolerance unreached
    non_integrable,         // endpoint weight makes the integral divergent
    attractive_out_of_range,// integral representation needs gamma > -1
    on_shell_diagonal,      // partial-wave projection rejected at k = k'
    degenerate_gamma,       // separated representation undefined at integer gamma
    io_failure,             // export destination not writable
    usage_error,            // malformed request (CLI)
    internal_failure,       // cross-check of two independent routes failed
};

const char* errc_name(errc code);

class Error : public std::runtime_error {
  public:
    Error(errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    errc code() const { return code_; }

  private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

} // namespace ctm
