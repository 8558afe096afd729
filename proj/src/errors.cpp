#include "ctmatrix/errors.hpp"

namespace ctm {

const char* errc_name(errc code) {
    switch (code) {
    case errc::non_negative_energy: return "non_negative_energy";
    case errc::out_of_range: return "out_of_range";
    case errc::forward_singularity: return "forward_singularity";
    case errc::backward_indeterminate: return "backward_indeterminate";
    case errc::bound_state_pole: return "bound_state_pole";
    case errc::convergence_failure: return "convergence_failure";
    case errc::quadrature_failure: return "quadrature_failure";
    case errc::non_integrable: return "non_integrable";
    case errc::attractive_out_of_range: return "attractive_out_of_range";
    case errc::on_shell_diagonal: return "on_shell_diagonal";
    case errc::degenerate_gamma: return "degenerate_gamma";
    case errc::io_failure: return "io_failure";
    case errc::usage_error: return "usage_error";
    case errc::internal_failure: return "internal_failure";
    }
    return "unknown";
}

} // namespace ctm
