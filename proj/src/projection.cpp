#include <algorithm>
#include <cmath>

#include "ctmatrix/dispatch.hpp"
#include "ctmatrix/quadrature.hpp"
#include "ctmatrix/special.hpp"

namespace ctm {

QuadResult project_partial_wave(const EnergyState& st, double k, double k_prime, int l,
                                Representation rep, const QuadOptions& opts) {
    if (l < 0 || l > 20)
        fail(errc::out_of_range, "partial-wave degree must lie in [0, 20]");
    if (!(k > 0.0) || !(k_prime > 0.0))
        fail(errc::out_of_range, "momenta must be positive");
    if (k == k_prime)
        fail(errc::on_shell_diagonal,
             "the projection integrand has a non-integrable forward peak at k = k'");

    // Work in the sphere angle: cos theta = +-1 pin the angular window, the
    // matrix element factors as prefactor * B(g, w) (the prefactor carries no
    // cos theta dependence), and the angle map contributes the Jacobian
    // dx = -(D sin w)/(4 kappa^2 k k') dw.
    const FockPoint forward = make_fock_point(st, k, k_prime, 1.0);
    const FockPoint backward = make_fock_point(st, k, k_prime, -1.0);
    const double kap2 = st.kappa * st.kappa;
    const double D = (k * k + kap2) * (k_prime * k_prime + kap2);
    const double two_kk = 2.0 * k * k_prime;
    const double pre = prefactor(st, forward);

    // Inner bracket evaluations run at their default (tight) tolerances so
    // their error stays below the outer rule's own estimate.
    const EvalOptions inner{};
    auto integrand = [&](double w) {
        const double s = std::sin(0.5 * w);
        double c = (k * k + k_prime * k_prime - D / kap2 * (s * s)) / two_kk;
        c = std::clamp(c, -1.0, 1.0);
        const double jac = D * std::sin(w) / (2.0 * kap2 * two_kk);
        return legendre_p(l, c) * evaluate_bracket(rep, st.gamma, w, inner).value * jac;
    };

    QuadResult r = integrate(integrand, forward.omega, backward.omega, opts);
    r.value *= 0.5 * pre;
    r.abs_err *= 0.5 * std::abs(pre);
    return r;
}

} // namespace ctm
